#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sfradar/sensing.hpp"

using namespace sfr;

namespace {

struct Fixture {
  Scenario sc;
  PulseSchedule sched;
  WaveformMatrix wf;
  std::vector<MeasurementMatrix> phis;
};

Fixture make_fixture(ScheduleMode mode, std::uint64_t seed, std::size_t mt = 8,
                     std::size_t nr = 2, std::size_t m = 4, std::size_t np = 4) {
  Rng rng(seed);
  Fixture f;
  f.sc.carrier_hz = 5e9;
  f.sc.tx_nodes = place_nodes_uniform_disk(mt, 10.0, rng);
  f.sc.rx_nodes = place_nodes_uniform_disk(nr, 10.0, rng);
  f.sc.noise_power = 0.0;
  ScheduleParams p;
  p.step_min = 0.05;
  p.step_max = 0.3;
  p.constant_pulses = np / 2;
  f.sched = make_schedule(mode, np, 2.5e-4, 5e9, p, rng);
  f.wf = gen_orthogonal_qpsk(4 * mt, mt, 2e-7, rng);
  for (std::size_t l = 0; l < nr; ++l)
    f.phis.push_back(gaussian_measurement_matrix(m, mt, l, rng));
  return f;
}

std::vector<std::size_t> all_pulses(std::size_t np) {
  std::vector<std::size_t> p(np);
  for (std::size_t i = 0; i < np; ++i) p[i] = i;
  return p;
}

CVec column_of(const SensingMatrix& theta, std::size_t col) {
  CVec c(theta.mat.rows());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = theta.mat(i, col);
  return c;
}

double column_abs_correlation(const SensingMatrix& theta, std::size_t i,
                              std::size_t j) {
  const CVec a = column_of(theta, i), b = column_of(theta, j);
  return std::abs(linalg::inner(a, b)) / (linalg::norm2(a) * linalg::norm2(b));
}

}  // namespace

TEST_CASE("grid factories, sizes and index round trips") {
  const std::vector<double> av{-0.1, 0.0, 0.1};
  const std::vector<double> vv{10.0, 20.0};
  const std::vector<double> rv{1000.0, 1100.0, 1200.0, 1300.0};
  const ParamGrid g = ParamGrid::full3d(av, vv, rv);
  REQUIRE(g.size() == 24);
  CHECK(g.angle_active());
  CHECK(g.velocity_active());
  CHECK(g.range_active());

  // First flat index is the first point on every axis, last is the last.
  const GridPoint first = g.point(0);
  CHECK(first.angle == -0.1);
  CHECK(first.velocity == 10.0);
  CHECK(first.range == 1000.0);
  const GridPoint last = g.point(23);
  CHECK(last.angle == 0.1);
  CHECK(last.velocity == 20.0);
  CHECK(last.range == 1300.0);

  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.flat_index(g.point(i)) == i);
  CHECK_FALSE(g.try_flat_index(GridPoint{0.05, 10.0, 1000.0}).has_value());
  CHECK_THROWS_AS(g.flat_index(GridPoint{0.0, 15.0, 1000.0}), std::out_of_range);
  CHECK_THROWS_AS(g.point(24), std::out_of_range);

  const ParamGrid ga = ParamGrid::angle_only(av, 5.0, 2000.0);
  REQUIRE(ga.size() == 3);
  CHECK(ga.point(1).angle == 0.0);
  CHECK(ga.point(1).velocity == 5.0);
  CHECK(ga.point(1).range == 2000.0);

  const std::vector<GridPoint> anchors{GridPoint{-0.1, 0.0, 1500.0},
                                       GridPoint{0.1, 0.0, 1500.0}};
  const ParamGrid gv = ParamGrid::velocity_only(vv, anchors);
  REQUIRE(gv.size() == 4);
  CHECK(gv.point(2).angle == 0.1);   // second anchor
  CHECK(gv.point(2).velocity == 10.0);
  CHECK(gv.point(3).velocity == 20.0);
  for (std::size_t i = 0; i < gv.size(); ++i)
    CHECK(gv.flat_index(gv.point(i)) == i);
  // A velocity paired with an unknown anchor is off-grid.
  CHECK_FALSE(gv.try_flat_index(GridPoint{0.0, 10.0, 1500.0}).has_value());

  const ParamGrid gr = ParamGrid::range_only(rv, anchors);
  REQUIRE(gr.size() == 8);
  CHECK(gr.point(5).range == 1100.0);
  CHECK(gr.point(5).angle == 0.1);

  CHECK_THROWS_AS(ParamGrid::full3d({0.0, 0.0}, vv, rv), std::invalid_argument);
  CHECK_THROWS_AS(ParamGrid::full3d({0.1, -0.1}, vv, rv), std::invalid_argument);
  CHECK_THROWS_AS(ParamGrid::full3d({}, vv, rv), std::invalid_argument);
  CHECK_THROWS_AS(ParamGrid::velocity_only(vv, {}), std::invalid_argument);
}

TEST_CASE("basis_phase_cycles matches the direct formula") {
  const GridPoint p{0.35, 47.0, 1234.5};
  const PolarNode rx{6.2, 1.7};
  const double fm = 5.4e9, T = 2.5e-4;
  for (std::size_t m : {std::size_t{0}, std::size_t{3}, std::size_t{9}}) {
    const double oracle =
        (-2.0 * p.range + eta(rx, p.angle)) * fm / kSpeedOfLight +
        2.0 * p.velocity * fm * static_cast<double>(m) * T / kSpeedOfLight;
    CHECK(basis_phase_cycles(p, rx, fm, m, T) ==
          doctest::Approx(oracle).epsilon(1e-14));
  }
  // m = 0 removes the velocity term entirely.
  const double no_vel = basis_phase_cycles(GridPoint{0.35, 0.0, 1234.5}, rx, fm, 0, T);
  CHECK(basis_phase_cycles(p, rx, fm, 0, T) == doctest::Approx(no_vel));
}

TEST_CASE("basis column with zero parameters at an origin receiver is Phi v-sum") {
  Fixture f = make_fixture(ScheduleMode::kConstant, 21);
  f.sc.rx_nodes[0] = PolarNode{0.0, 0.0};
  const GridPoint p{0.4, 0.0, 0.0};  // no range or velocity phase
  const CVec col = basis_column(p, 0, 0, f.sc, f.sched, f.wf, f.phis[0]);

  // Oracle: with b = 0 the Doppler matrix is the identity, so the column is
  // Phi X^H X v = Phi v by orthonormality.
  const CVec v = steering_vector(f.sched.carrier_of(0), f.sc.tx_nodes, p.angle);
  const CVec oracle = linalg::matvec(f.phis[0].entries, v);
  REQUIRE(col.size() == oracle.size());
  for (std::size_t i = 0; i < col.size(); ++i)
    CHECK(std::abs(col[i] - oracle[i]) < 1e-9);
}

TEST_CASE("half-wavelength range offset flips the column sign") {
  Fixture f = make_fixture(ScheduleMode::kConstant, 22);
  const double wavelength = kSpeedOfLight / f.sched.carrier_of(0);
  const GridPoint p{0.1, 0.0, 2000.0};
  const GridPoint q{0.1, 0.0, 2000.0 + wavelength / 4.0};  // 2r phase: half cycle
  const CVec cp = basis_column(p, 1, 2, f.sc, f.sched, f.wf, f.phis[1]);
  const CVec cq = basis_column(q, 1, 2, f.sc, f.sched, f.wf, f.phis[1]);
  for (std::size_t i = 0; i < cp.size(); ++i)
    CHECK(std::abs(cq[i] + cp[i]) < 1e-9);
}

TEST_CASE("ranges are invisible under a constant carrier but not under stepping") {
  const std::vector<double> ranges{1000.0, 1050.0, 1100.0};
  const auto correlations = [&](ScheduleMode mode) {
    Fixture f = make_fixture(mode, 23);
    const ParamGrid g =
        ParamGrid::range_only(ranges, {GridPoint{0.2, 30.0, 0.0}});
    const SensingMatrix theta = build_sensing_matrix(
        g, f.sc, f.sched, f.wf, f.phis, all_pulses(f.sched.pulse_count));
    return std::pair{column_abs_correlation(theta, 0, 1),
                     column_abs_correlation(theta, 0, 2)};
  };

  const auto [c01, c02] = correlations(ScheduleMode::kConstant);
  CHECK(std::abs(c01 - 1.0) < 1e-9);  // parallel columns: range not identifiable
  CHECK(std::abs(c02 - 1.0) < 1e-9);

  const auto [r01, r02] = correlations(ScheduleMode::kRandom);
  CHECK(r01 < 1.0 - 1e-3);
  CHECK(r02 < 1.0 - 1e-3);
}

TEST_CASE("sensing matrix layout and pulse-subset reordering") {
  Fixture f = make_fixture(ScheduleMode::kRandom, 24);
  const ParamGrid g = ParamGrid::full3d({-0.1, 0.1}, {10.0, 20.0}, {900.0, 950.0});
  const std::vector<std::size_t> fwd{0, 1, 2, 3};
  const std::vector<std::size_t> rev{3, 2, 0, 1};
  const SensingMatrix a = build_sensing_matrix(g, f.sc, f.sched, f.wf, f.phis, fwd);
  const SensingMatrix b = build_sensing_matrix(g, f.sc, f.sched, f.wf, f.phis, rev);
  REQUIRE(a.mat.rows() == f.phis.size() * 4 * 4);
  REQUIRE(a.mat.cols() == g.size());
  CHECK(a.block_size == 4);
  CHECK(a.rx_count == 2);

  // Reordering the pulse subset permutes whole (l, m) blocks.
  const std::size_t M = a.block_size;
  for (std::size_t l = 0; l < 2; ++l) {
    for (std::size_t pi = 0; pi < rev.size(); ++pi) {
      // rev[pi] sits at position pi in b; find it in a at position rev[pi].
      const std::size_t rb = (l * 4 + pi) * M;
      const std::size_t ra = (l * 4 + rev[pi]) * M;
      for (std::size_t i = 0; i < M; ++i)
        for (std::size_t c = 0; c < g.size(); ++c)
          CHECK(b.mat(rb + i, c) == a.mat(ra + i, c));
    }
  }

  // Column norms stay within a modest spread (coherent design, no fading).
  double lo = 1e300, hi = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const double n = linalg::norm2(column_of(a, c));
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  CHECK(hi / lo < 1.5);
}

TEST_CASE("synthesized measurement equals Theta times the true coefficients") {
  Fixture f = make_fixture(ScheduleMode::kHybrid, 25, 16, 3, 8, 6);
  const std::vector<double> av{-0.2, 0.0, 0.2};
  const std::vector<double> vv{20.0, 40.0, 60.0};
  const std::vector<double> rv{1000.0, 1200.0, 1400.0};
  f.sc.targets = {Target{-0.2, 40.0, 1200.0, cd{0.9, 0.3}},
                  Target{0.2, 20.0, 1400.0, cd{-0.5, 1.1}}};

  const ParamGrid g = ParamGrid::full3d(av, vv, rv);
  const auto pulses = all_pulses(6);
  const SensingMatrix theta =
      build_sensing_matrix(g, f.sc, f.sched, f.wf, f.phis, pulses);
  CVec s_true(g.size(), cd{0.0, 0.0});
  for (const auto& t : f.sc.targets) {
    s_true[g.flat_index(GridPoint{t.azimuth, t.radial_speed, t.initial_range})] =
        t.reflection;
  }
  const CVec model = theta.apply(s_true);
  const CVec synth = synthesize_fused(f.sc, f.sched, f.wf, f.phis, pulses, 1);
  REQUIRE(model.size() == synth.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    num += std::norm(synth[i] - model[i]);
    den += std::norm(synth[i]);
  }
  CHECK(std::sqrt(num / den) < 1e-9);
}

TEST_CASE("sensing matrix input validation and memory guard") {
  Fixture f = make_fixture(ScheduleMode::kConstant, 26);
  const ParamGrid g = ParamGrid::full3d({0.0}, {0.0}, {1000.0});
  CHECK_THROWS_AS(build_sensing_matrix(g, f.sc, f.sched, f.wf, f.phis, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_sensing_matrix(g, f.sc, f.sched, f.wf, f.phis, {7}),
                  std::out_of_range);
  CHECK_THROWS_AS(
      build_sensing_matrix(g, f.sc, f.sched, f.wf, {f.phis[0]}, {0}),
      std::invalid_argument);

  try {
    build_sensing_matrix(g, f.sc, f.sched, f.wf, f.phis, {0, 1}, 8);
    FAIL("expected length_error");
  } catch (const std::length_error& e) {
    CHECK(std::string(e.what()).find("decoupled") != std::string::npos);
  }

  // A 1-point grid yields a single well-formed column.
  const SensingMatrix one =
      build_sensing_matrix(g, f.sc, f.sched, f.wf, f.phis, {0, 1});
  REQUIRE(one.mat.cols() == 1);
  CHECK(linalg::norm2(column_of(one, 0)) > 0.0);
}
