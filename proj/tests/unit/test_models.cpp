#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "pseudolap/errors.hpp"
#include "pseudolap/models.hpp"
#include "pseudolap/secular.hpp"

using namespace pseudolap;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "pseudolap_model_tests";
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Builtins, AllLoadAndValidate) {
  for (const auto& info : builtin_models()) {
    const SurfaceModel m = builtin_model(info.name);
    EXPECT_NO_THROW(validate_model(m)) << info.name;
    EXPECT_EQ(m.scattering->dimension(), m.num_cusps());
  }
  EXPECT_THROW(builtin_model("no-such-model"), ModelFormatError);
  EXPECT_THROW(resolve_model("no-such-model"), ModelFormatError);
}

TEST(ModelFile, Synthetic) {
  const fs::path p = scratch_dir() / "twin.ini";
  write(p,
        "[topology]\nname = twin-file\ngenus = 1\n"
        "[cusps]\nbase_heights = 1, 1\n"
        "[scattering]\nkind = synthetic\nbetas = 0.9, 0.9\nmixing = 0.6, -0.8, 0.8, 0.6\n"
        "[systole]\nlength = 0.5\n");
  const SurfaceModel m = load_model_file(p.string());
  EXPECT_EQ(m.name, "twin-file");
  EXPECT_EQ(m.num_cusps(), 2u);
  ASSERT_TRUE(m.systole_hint.has_value());
  EXPECT_DOUBLE_EQ(*m.systole_hint, 0.5);
  const auto res = residual_spectrum(*m.scattering);
  ASSERT_EQ(res.size(), 1u);
  EXPECT_EQ(res[0].second, 2);
}

TEST(ModelFile, BadMixingRejected) {
  const fs::path p = scratch_dir() / "bad.ini";
  write(p,
        "[topology]\ngenus = 1\n[cusps]\nbase_heights = 1, 1\n"
        "[scattering]\nkind = synthetic\nbetas = 0.9, 0.8\nmixing = 1, 1, 0, 1\n");
  EXPECT_THROW(load_model_file(p.string()), InputError);
}

TEST(ModelFile, TabulatedRoundTrip) {
  // phi(s) = 1 + (2 beta - 1) / (s - beta) for beta = 0.8 sampled on both lines
  const double beta = 0.8;
  const auto exact = synthetic_model({beta}, Eigen::MatrixXd::Identity(1, 1));
  const fs::path dir = scratch_dir();
  std::ofstream t(dir / "beta08.tab");
  t << "# beta = 0.8\ndim 1\n";
  t.precision(17);
  for (int k = 0; k <= 400; ++k) {
    const double s = 0.5 + 0.5 * k / 400.0;
    if (std::abs(s - beta) < 1e-9) continue;
    const Complex v = exact->eval(s)(0, 0);
    t << "sample " << s << " 0 " << v.real() << ' ' << v.imag() << '\n';
  }
  for (int k = 1; k <= 400; ++k) {
    const double y = 20.0 * k / 400.0;
    const Complex v = exact->eval(Complex(0.5, y))(0, 0);
    t << "sample 0.5 " << y << ' ' << v.real() << ' ' << v.imag() << '\n';
  }
  const Complex r = exact->poles()[0].residue(0, 0);
  t << "pole " << beta << ' ' << r.real() << ' ' << r.imag() << '\n';
  t.close();
  write(dir / "tab.ini",
        "[topology]\ngenus = 1\n[cusps]\nbase_heights = 1\n[scattering]\nkind = tabulated\ntable = beta08.tab\n");
  const SurfaceModel m = load_model_file((dir / "tab.ini").string());
  const auto r1 = real_branch_roots(*m.scattering, {40.0}, 0.5, 1.0);
  const auto r2 = real_branch_roots(*exact, {40.0}, 0.5, 1.0);
  ASSERT_EQ(r1.roots.size(), r2.roots.size());
  for (std::size_t k = 0; k < r1.roots.size(); ++k)
    EXPECT_NEAR(r1.roots[k].param.s.real(), r2.roots[k].param.s.real(), 1e-6);
}

TEST(ModelFile, MissingFile) {
  EXPECT_THROW(load_model_file((scratch_dir() / "absent.ini").string()), ModelFormatError);
  const fs::path p = scratch_dir() / "junk.tab";
  write(p, "sample 0.6 0 1 0\n");
  EXPECT_THROW(load_scattering_table(p.string(), "junk"), ModelFormatError);
}
