#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <set>

#include "recreg/report.hpp"
#include "recreg/simulation.hpp"

using namespace recreg;
using namespace recreg::sim;
using Catch::Approx;

TEST_CASE("regression models", "[simlab]") {
  CHECK(RegressionModel::from_name("cos")(0.4) == std::cos(0.4));
  CHECK(RegressionModel::from_name("linear")(-0.5) == Approx(0.8).epsilon(1e-15));
  CHECK(RegressionModel::from_name("bimodal_exp")(1.0) ==
        Approx(0.3 * std::exp(-16.0) + 0.7).epsilon(1e-15));
  CHECK_THROWS_AS(RegressionModel::from_name("sin"), InvalidArgument);
  for (auto id : {ModelId::cosine, ModelId::bimodal_exp, ModelId::linear, ModelId::constant}) {
    const RegressionModel m{id};
    CHECK(RegressionModel::from_name(m.name()) == m);
  }
}

TEST_CASE("design densities integrate to one", "[simlab]") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double inf = std::numeric_limits<double>::infinity();
  for (auto id : {DesignId::std_normal, DesignId::normal_mixture, DesignId::student6}) {
    const DesignDensity d{id};
    INFO(d.name());
    CHECK(ts.integrate([&](double x) { return d.pdf(x); }, -inf, inf) == Approx(1.0).margin(1e-6));
    CHECK(DesignDensity::from_name(d.name()) == d);
  }
  CHECK_THROWS_AS(DesignDensity::from_name("cauchy"), InvalidArgument);
}

TEST_CASE("design sample moments", "[simlab]") {
  auto moments = [](DesignId id) {
    Engine rng(123);
    std::normal_distribution<double> normal;
    const DesignDensity d{id};
    double sum = 0.0, sq = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
      const double x = d.sample(rng, normal);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / n;
    return std::pair{mean, sq / n - mean * mean};
  };
  const auto [m_mix, v_mix] = moments(DesignId::normal_mixture);
  CHECK(m_mix == Approx(0.0).margin(0.005));
  CHECK(v_mix == Approx(1.25).margin(0.01));
  const auto [m_t, v_t] = moments(DesignId::student6);
  CHECK(m_t == Approx(0.0).margin(0.005));
  CHECK(v_t == Approx(1.5).margin(0.02));
}

TEST_CASE("noiseless samples lie on the regression curve", "[simlab]") {
  SimConfig cfg;
  cfg.d = 0.0;
  cfg.n = 100;
  for (const auto& s : draw_samples(cfg, 4)) CHECK(s.y == cfg.model(s.x));
}

TEST_CASE("streams depend on configuration, not on order", "[simlab]") {
  SimConfig cfg;
  cfg.n = 20;
  const auto a = draw_samples(cfg, 7);
  const auto b = draw_samples(cfg, 7);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].x == b[i].x);
  std::set<std::uint64_t> seeds;
  for (std::uint64_t r = 0; r < 1000; ++r) seeds.insert(stream_seed(42, 200, 1.0, r));
  seeds.insert(stream_seed(42, 200, 2.0, 0));
  seeds.insert(stream_seed(42, 100, 1.0, 0));
  seeds.insert(stream_seed(43, 200, 1.0, 0));
  CHECK(seeds.size() == 1003);
}

TEST_CASE("config validation", "[simlab]") {
  SimConfig cfg;
  cfg.reps = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.reps = 1;
  cfg.n = 1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.n = 10;
  cfg.d = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.d = 1.0;
  cfg.points.clear();
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("run_table smoke test", "[simlab]") {
  SimConfig tmpl;
  tmpl.reps = 10;
  const auto report = run_table(RegressionModel{ModelId::linear}, DesignDensity{DesignId::student6}, tmpl);
  CHECK(report.cells.size() == 36);
  for (const auto& c : report.cells) {
    CHECK(c.coverage >= 0.0);
    CHECK(c.coverage <= 1.0);
    CHECK(c.reps == 10);
  }
  CHECK(report.find(2.0, 200, 0.5, "averaged")->theoretical_level == Approx(0.97157).epsilon(1e-5));
  CHECK(report.find(1.0, 50, -0.5, "nw")->theoretical_level == Approx(0.95).margin(1e-4));
}

TEST_CASE("noiseless single replication runs without fault", "[simlab]") {
  SimConfig cfg;
  cfg.model = RegressionModel{ModelId::linear};
  cfg.d = 0.0;
  cfg.reps = 1;
  cfg.n = 200;
  const auto report = run_cell(cfg);
  for (const auto& c : report.cells) CHECK((c.coverage == 0.0 || c.coverage == 1.0));
}

TEST_CASE("results do not depend on the thread count", "[simlab]") {
  SimConfig cfg;
  cfg.reps = 60;
  cfg.n = 50;
  const auto one = to_csv(run_cell(cfg, 1));
  const auto three = to_csv(run_cell(cfg, 3));
  CHECK(one == three);
}

TEST_CASE("residual conventions differ only in the fits", "[simlab]") {
  SimConfig cfg;
  cfg.reps = 40;
  cfg.n = 50;
  cfg.residuals = Residuals::in_sample;
  const auto in = run_cell(cfg);
  cfg.residuals = Residuals::leave_one_out;
  const auto loo = run_cell(cfg);
  // leave-one-out residuals are larger, so intervals are wider on average
  for (std::size_t i = 0; i < in.cells.size(); ++i) {
    CHECK(loo.cells[i].mean_width > in.cells[i].mean_width);
  }
  CHECK(residuals_from_name(residuals_name(Residuals::in_sample)) == Residuals::in_sample);
  CHECK_THROWS_AS(residuals_from_name("jackknife"), InvalidArgument);
}

TEST_CASE("heavy-tailed designs do not make NW replications degenerate", "[simlab]") {
  // t6 outliers get no leave-one-out kernel mass at n = 200
  SimConfig cfg;
  cfg.design = DesignDensity::from_name("student6");
  cfg.n = 200;
  cfg.reps = 200;
  cfg.estimators = EstimatorChoice::nw;
  const auto rep = run_cell(cfg);
  for (const auto& c : rep.cells) {
    INFO("x = " << c.x);
    CHECK(c.degenerate == 0);
    CHECK(c.coverage > 0.9);
  }
}

TEST_CASE("harness fits equal library intervals", "[simlab]") {
  SimConfig cfg;
  cfg.reps = 1;
  cfg.n = 80;
  const auto hist = draw_samples(cfg, 0);
  const auto outcome = run_replication(cfg, 0);
  const double h = cfg.estimator_cfg.bandwidth().eval(cfg.n);
  for (std::size_t j = 0; j < cfg.points.size(); ++j) {
    const double x = cfg.points[j];
    const auto nw = nw_interval(hist, x, h, cfg.kernel, kNormalQuantile975, cfg.residuals);
    CHECK(outcome[j].nw_width == Approx(2 * nw.half_width).epsilon(1e-12));
    RecursiveRegressor reg(cfg.estimator_cfg, cfg.kernel, {x});
    RecursiveDensity dens(cfg.estimator_cfg, cfg.kernel, {x});
    for (const auto& s : hist) {
      reg.update(s);
      dens.update(s.x);
    }
    AveragedIntervalOptions opts;
    opts.residuals = cfg.residuals;
    const auto avg = averaged_interval(hist, x, cfg.estimator_cfg, cfg.kernel, reg, dens, opts);
    CHECK(outcome[j].avg_width == Approx(2 * avg.half_width).epsilon(1e-12));
  }
}

TEST_CASE("CSV and text output", "[simlab]") {
  CoverageReport rep;
  CoverageCell c;
  c.model = "cos";
  c.design = "std_normal";
  c.d = 1.0;
  c.n = 50;
  c.x = -0.5;
  c.estimator = "nw";
  c.coverage = 0.965;
  c.se = 0.0026;
  c.mean_width = 0.5;
  c.theoretical_level = 0.95;
  rep.cells.push_back(c);
  CHECK(to_csv(rep) == std::string(kCsvHeader) +
                           "\ncos,std_normal,1,50,-0.5,nw,0.965000,0.002600,0.5,0.950000\n");
  const auto text = to_text_table(rep);
  CHECK(text.find("96.50%") != std::string::npos);
  CHECK(text.find("95.00%") != std::string::npos);
}

TEST_CASE("CLT diagnostic for a noiseless constant model", "[simlab]") {
  SimConfig cfg;
  cfg.model = RegressionModel{ModelId::constant, 2.0};
  cfg.d = 0.0;
  cfg.n = 300;
  cfg.reps = 50;
  const auto diag = clt_diagnostic(cfg, 0.0);
  const auto* nw = diag.find("nw");
  REQUIRE(nw);
  CHECK(nw->limit_variance == 0.0);
  CHECK(nw->variance == Approx(0.0).margin(1e-20));
  const auto* avg = diag.find("averaged");
  REQUIRE(avg);
  CHECK(avg->limit_variance == 0.0);
  // With r_0 = 0 the averaged error is 2 * (rbar_n(0) with Y = 1) - 2, random through X.
  CHECK(avg->mean < 0.0);
}

TEST_CASE("KS distance of normal quantiles is small", "[simlab]") {
  std::vector<double> v;
  Engine rng(1);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 4000; ++i) v.push_back(nd(rng));
  CHECK(ks_distance_to_normal(v) < 0.03);
  for (auto& x : v) x += 1.0;
  CHECK(ks_distance_to_normal(v) > 0.3);
}
