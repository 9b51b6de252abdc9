#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <unistd.h>

#include "boomprop/domain.hpp"
#include "boomprop/error.hpp"
#include "boomprop/field.hpp"
#include "boomprop/field_io.hpp"
#include "boomprop/spectral.hpp"
#include "doctest.h"

using namespace boomprop;
namespace fs = std::filesystem;

namespace {

Field2D random_field(std::size_t rows, std::size_t cols, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field2D f(rows, cols);
  for (auto& x : f.values()) x = u(gen);
  return f;
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("boomprop_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_CASE("axes of the default domain") {
  DomainConfig c;
  c.n_sigma = 300;
  const auto axes = build_axes(c, RhoBoundary::periodic);
  CHECK(c.d_sigma() == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(axes.sigma.size() == 301);
  CHECK(axes.sigma[1] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(axes.sigma.back() == 120.0);
  CHECK(axes.theta.size() == static_cast<std::size_t>(c.n_theta));
}

TEST_CASE("single sigma step keeps both endpoints") {
  DomainConfig c;
  c.n_sigma = 1;
  const auto axes = build_axes(c, RhoBoundary::periodic);
  REQUIRE(axes.sigma.size() == 2);
  CHECK(axes.sigma[0] == 0.0);
  CHECK(axes.sigma[1] == c.sigma_total);
}

TEST_CASE("periodic rho axis excludes the right endpoint, Neumann keeps it") {
  DomainConfig c;
  c.n_rho = 4;
  c.roi_rho = {100, 300};
  const auto p = build_axes(c, RhoBoundary::periodic);
  CHECK(p.rho == std::vector<double>{0, 100, 200, 300});
  const auto n = build_axes(c, RhoBoundary::neumann);
  CHECK(n.rho == std::vector<double>{0, 100, 200, 300, 400});
}

TEST_CASE("validation names the offending key") {
  DomainConfig c;
  c.n_sigma = 0;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "n_sigma");
  }
  c = DomainConfig{};
  c.rho_max = c.rho_min;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = DomainConfig{};
  c.roi_rho = {-1, 10};
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "roi_rho");
  }
  CHECK_THROWS_AS(grid_set(5), ConfigError);
}

TEST_CASE("grid presets double every count") {
  for (int s = 1; s <= 4; ++s) {
    const auto c = grid_set(s);
    CHECK(c.n_sigma == 300 << (s - 1));
    CHECK(c.n_rho == 1250 << (s - 1));
    CHECK(c.n_theta == 448 << (s - 1));
  }
}

TEST_CASE("l2 norm closed forms and oracle") {
  CHECK(l2_norm(Field2D(3, 5), 0.5, 0.25) == 0.0);
  CHECK(l2_norm(Field2D(2, 2, 1.0), 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));

  const auto f = random_field(17, 23, 1);
  long double sum = 0;
  for (std::size_t j = 0; j < f.rows(); ++j) {
    for (std::size_t k = 0; k < f.cols(); ++k) sum += static_cast<long double>(f(j, k)) * f(j, k);
  }
  const double oracle = std::sqrt(static_cast<double>(0.3L * 0.7L * sum));
  CHECK(std::abs(l2_norm(f, 0.3, 0.7) - oracle) <= 1e-14 * oracle);

  Field2D bad(2, 2);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(l2_norm(bad, 1, 1), std::domain_error);
}

TEST_CASE("l2 norm is absolutely homogeneous") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_field(9, 11, 100 + trial);
    const double c = u(gen);
    const double base = l2_norm(f, 0.1, 0.2);
    for (auto& x : f.values()) x *= c;
    CHECK(l2_norm(f, 0.1, 0.2) == doctest::Approx(std::abs(c) * base).epsilon(1e-13));
  }
}

TEST_CASE("relative error") {
  const auto ref = random_field(8, 12, 3);
  CHECK(relative_error(ref, ref, 1, 1) == 0.0);
  Field2D twice = ref;
  for (auto& x : twice.values()) x *= 2;
  CHECK(relative_error(ref, twice, 1, 1) == doctest::Approx(1.0).epsilon(1e-15));

  // e orthogonal to ref with ||e|| = 0.1 ||ref||: ||ref - (ref + e)|| / ||ref|| = 0.1.
  auto e = random_field(8, 12, 4);
  double dot = 0, rr = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    dot += e.values()[i] * ref.values()[i];
    rr += ref.values()[i] * ref.values()[i];
  }
  for (std::size_t i = 0; i < e.size(); ++i) e.values()[i] -= dot / rr * ref.values()[i];
  double ortho = 0;
  for (std::size_t i = 0; i < e.size(); ++i) ortho += e.values()[i] * ref.values()[i];
  REQUIRE(std::abs(ortho) < 1e-12);
  const double scale = 0.1 * l2_norm(ref, 0.5, 2) / l2_norm(e, 0.5, 2);
  Field2D num = ref;
  for (std::size_t i = 0; i < e.size(); ++i) num.values()[i] += scale * e.values()[i];
  CHECK(relative_error(ref, num, 0.5, 2) == doctest::Approx(0.1).epsilon(1e-12));

  CHECK_THROWS(relative_error(Field2D(2, 2), Field2D(2, 2), 1, 1));
  CHECK_THROWS(relative_error(ref, Field2D(8, 11), 1, 1));
}

TEST_CASE("region extraction") {
  const auto f = random_field(4, 6, 5);
  const FieldGeometry g{0.0, 0.0, 100.0, 1.0};
  const auto full = extract_region(f, g, {0, 300}, {0, 5});
  CHECK(full.field == f);

  const auto r = extract_region(f, g, {100, 300}, {0, 5});
  CHECK(r.rho_begin == 1);
  CHECK(r.field.rows() == 3);
  CHECK(r.geometry.rho0 == 100.0);
  CHECK(r.field(0, 2) == f(1, 2));

  CHECK_THROWS(extract_region(f, g, {110, 150}, {0, 5}));

  const auto again = extract_region(r.field, r.geometry, {100, 300}, {0, 5});
  CHECK(again.field == r.field);
}

TEST_CASE("paper region on the Set-2 grid matches a scan") {
  const auto c = grid_set(2);
  const FieldGeometry g{c.rho_min, c.theta_min, c.d_rho(), c.d_theta()};
  const std::size_t n = static_cast<std::size_t>(c.n_rho) + 1;
  std::size_t first = 0, last = 0;
  REQUIRE(node_range(g.rho0, g.d_rho, n, c.roi_rho, first, last));
  std::size_t scan_first = n, scan_last = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.rho0 + j * g.d_rho;
    if (x >= c.roi_rho.lo && x <= c.roi_rho.hi) {
      scan_first = std::min(scan_first, j);
      scan_last = j;
    }
  }
  CHECK(first == scan_first);
  CHECK(last == scan_last);
}

TEST_CASE("spectral round trip and DFT oracle") {
  for (auto [nr, nt] : {std::pair<std::size_t, std::size_t>{8, 12}, {30, 64}, {25, 18}}) {
    const auto f = random_field(nr, nt, static_cast<unsigned>(nr * nt));
    const auto s = to_spectral(f);
    const auto back = to_physical(s);
    CHECK(relative_error(f, back, 1, 1) < 1e-12);
  }

  const std::size_t nr = 6, nt = 10;
  const auto f = random_field(nr, nt, 11);
  const auto s = to_spectral(f);
  const double tau = 2 * std::numbers::pi;
  for (long j = -2; j <= 3; ++j) {
    for (long k = -4; k <= 5; ++k) {
      std::complex<double> sum = 0;
      for (std::size_t a = 0; a < nr; ++a) {
        for (std::size_t b = 0; b < nt; ++b) {
          sum += f(a, b) * std::polar(1.0, -tau * (double(j) * a / nr + double(k) * b / nt));
        }
      }
      sum /= double(nr * nt);
      CHECK(std::abs(s.at(j, k) - sum) < 1e-14);
      // Conjugate symmetry of a real field.
      CHECK(std::abs(s.at(-j, -k) - std::conj(s.at(j, k))) < 1e-15);
    }
  }
}

TEST_CASE("single precision transform round trip") {
  BasicField2D<float> f(16, 32);
  std::mt19937 gen(2);
  std::uniform_real_distribution<float> u(-1, 1);
  for (auto& x : f.values()) x = u(gen);
  const auto back = to_physical(to_spectral(f));
  double err = 0, norm = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    err += std::pow(double(back.values()[i]) - f.values()[i], 2);
    norm += std::pow(double(f.values()[i]), 2);
  }
  CHECK(std::sqrt(err / norm) < 1e-6);
}

TEST_CASE("snapshot round trip") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const auto f = random_field(3 + seed, 5 + 2 * seed, seed);
    const FieldGeometry g{1.5, -2.25, 0.125, 0.0625};
    const auto path = temp_path("snap.bin");
    write_snapshot(path, f, g, 41.0);
    const auto snap = read_snapshot(path);
    CHECK(snap.field == f);
    CHECK(snap.header.sigma == 41.0);
    CHECK(snap.header.geometry.rho0 == 1.5);
    CHECK(snap.header.geometry.d_theta == 0.0625);
    CHECK(fs::file_size(path) == kSnapshotHeaderBytes + 8 * f.size());

    std::ifstream in(path, std::ios::binary);
    char magic[8];
    in.read(magic, 8);
    CHECK(std::memcmp(magic, kSnapshotMagic, 8) == 0);
    std::uint64_t version = 0, rows = 0;
    in.read(reinterpret_cast<char*>(&version), 8);
    in.read(reinterpret_cast<char*>(&rows), 8);
    CHECK(version == 1);
    CHECK(rows == f.rows());
    fs::remove(path);
  }
  CHECK_THROWS_AS(read_snapshot(temp_path("missing.bin")), IoError);
}

TEST_CASE("corrupt snapshot is rejected") {
  const auto path = temp_path("bad.bin");
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOTAFIELD-------";
  }
  CHECK_THROWS(read_snapshot(path));
  fs::remove(path);
}

TEST_CASE("CSV export") {
  Field2D f(2, 3);
  f(1, 2) = 0.5;
  const auto path = temp_path("field.csv");
  write_field_csv(path, f, {10.0, -1.0, 2.0, 0.5});
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "rho,theta,V");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 6);
  CHECK(last == "12,0,0.5");
  fs::remove(path);
}
