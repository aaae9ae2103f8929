#include <cmath>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "firmlab/firm.hpp"
#include "oracles.hpp"

using namespace firmlab;

namespace {

const ProductionTech kTech{0.5};
const LaborSupply kSupply{1.0, 1.4};

Policy make_policy(double tau = 0.0, double c_f = 0.0, double w_min = 0.0,
                   double phi = 0.0, double delta = 0.0, double l_bar = 1.0,
                   double gamma = 1.0) {
  Policy p;
  p.tau = tau;
  p.c_f = c_f;
  p.w_min = w_min;
  p.phi = phi;
  p.delta = delta;
  p.detection = {l_bar, gamma};
  return p;
}

}  // namespace

TEST_CASE("unconstrained optimum matches grid-search oracle") {
  const FirmDecision d = formal_optimum_unconstrained(1.0, kTech, kSupply, 0.0);
  auto objective = [&](double l) {
    return formal_objective(1.0, kTech, kSupply, 0.0, 0.0, l);
  };
  const auto [l_star, profit] =
      oracles::zoomed_grid_argmax(objective, 1e-9, 5.0, 20000);
  CHECK(d.employment == Catch::Approx(l_star).margin(1e-4));
  CHECK(d.employment == Catch::Approx(0.3625088).margin(1e-6));
  CHECK(d.wage == Catch::Approx(0.4844261).margin(1e-6));
  CHECK(d.profit >= profit - 1e-10);
  CHECK(d.regime == MinWageRegime::NotBinding);
  CHECK_THROWS_AS(formal_optimum_unconstrained(0.0, kTech, kSupply, 0.0),
                  std::domain_error);
}

TEST_CASE("markdown identity at the unconstrained optimum") {
  // wage / MRPL = eta / (1 + eta): workers get 58% of marginal product
  const FirmDecision d = formal_optimum_unconstrained(1.0, kTech, kSupply, 0.0);
  const double mrpl = marginal_product(kTech, 1.0, d.employment);
  CHECK(d.wage / mrpl == Catch::Approx(1.4 / 2.4).epsilon(1e-9));

  // competitive limit: the markdown vanishes
  const LaborSupply competitive{1.0, 1e9};
  const FirmDecision c =
      formal_optimum_unconstrained(1.0, kTech, competitive, 0.0);
  CHECK(c.wage / marginal_product(kTech, 1.0, c.employment) ==
        Catch::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("FOC residual at randomized unconstrained optima") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> ua(0.2, 5.0), ual(0.2, 0.9),
      ub(0.3, 3.0), ue(0.5, 5.0), ut(0.0, 0.5);
  for (int i = 0; i < 50; ++i) {
    const double a = ua(gen), tau = ut(gen);
    const ProductionTech tech{ual(gen)};
    const LaborSupply supply{ub(gen), ue(gen)};
    const FirmDecision d = formal_optimum_unconstrained(a, tech, supply, tau);
    const double mrpl = marginal_product(tech, a, d.employment);
    const double mcl = (1.0 + tau) * supply_wage(supply, d.employment) *
                       (1.0 + 1.0 / supply.eta);
    CHECK(std::fabs(mrpl - mcl) <= 1e-9 * mrpl);
    // markdown identity, closed form
    CHECK(d.wage * (1.0 + tau) / mrpl ==
          Catch::Approx(supply.eta / (1.0 + supply.eta)).epsilon(1e-9));
  }
}

TEST_CASE("minimum-wage regimes on the reference calibration") {
  auto oracle_best = [&](const Policy& p) {
    auto objective = [&](double l) {
      return profit_at(1.0, kTech, kSupply, p, FirmStatus::Formal, l);
    };
    return oracles::zoomed_grid_argmax(objective, 1e-9, 5.0, 20000);
  };

  SECTION("w_min below w* cannot bind") {
    const Policy p = make_policy(0.0, 0.0, 0.3);
    const FirmDecision d = formal_optimum(1.0, kTech, kSupply, p);
    CHECK(d.regime == MinWageRegime::NotBinding);
    CHECK(d.employment == Catch::Approx(0.3625088).margin(1e-6));
    CHECK(d.wage == Catch::Approx(0.4844261).margin(1e-6));
  }
  SECTION("moderate w_min raises employment to L_min") {
    const Policy p = make_policy(0.0, 0.0, 0.6);
    const FirmDecision d = formal_optimum(1.0, kTech, kSupply, p);
    CHECK(d.regime == MinWageRegime::SupplyConstrained);
    CHECK(d.employment == Catch::Approx(0.4891159).margin(1e-6));
    CHECK(d.wage == 0.6);
    CHECK(d.employment > 0.3625088);  // minimum wage increased employment
    const auto [l_star, profit] = oracle_best(p);
    CHECK(d.employment == Catch::Approx(l_star).margin(1e-4));
    CHECK(d.profit >= profit - 1e-10);
  }
  SECTION("high w_min cuts employment on the demand curve") {
    const Policy p = make_policy(0.0, 0.0, 0.9);
    const FirmDecision d = formal_optimum(1.0, kTech, kSupply, p);
    CHECK(d.regime == MinWageRegime::DemandConstrained);
    CHECK(d.employment == Catch::Approx(0.30864197).margin(1e-6));
    CHECK(d.employment < 0.3625088);
    const auto [l_star, profit] = oracle_best(p);
    CHECK(d.employment == Catch::Approx(l_star).margin(1e-4));
    CHECK(d.profit >= profit - 1e-10);
  }
}

TEST_CASE("employment is continuous and single-peaked in w_min") {
  double prev_l = -1.0;
  bool decreasing = false;
  double peak_w = 0.0, peak_l = -1.0;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    const double w_min = 1.2 * i / n;
    const FirmDecision d =
        formal_optimum(1.0, kTech, kSupply, make_policy(0.0, 0.0, w_min));
    if (prev_l >= 0.0) {
      // continuity across regime boundaries
      CHECK(std::fabs(d.employment - prev_l) < 0.01);
      if (d.employment < prev_l - 1e-12) decreasing = true;
      if (decreasing) CHECK(d.employment <= prev_l + 1e-12);
    }
    if (d.employment > peak_l) {
      peak_l = d.employment;
      peak_w = w_min;
    }
    prev_l = d.employment;
  }
  // peak at the competitive wage solving a f'(L) = w(L)
  CHECK(peak_w == Catch::Approx(0.665156).margin(1.2 / n + 1e-9));
  CHECK(peak_l == Catch::Approx(0.5650579).margin(5e-3));
}

TEST_CASE("regime boundary limits agree") {
  // left/right limits of L(w_min) around both regime switches
  auto employment_at = [&](double w_min) {
    return formal_optimum(1.0, kTech, kSupply, make_policy(0.0, 0.0, w_min))
        .employment;
  };
  const double w_star = 0.4844261, w_comp = 0.6651560;
  for (double boundary : {w_star, w_comp}) {
    const double eps = 1e-7;
    CHECK(employment_at(boundary - eps) ==
          Catch::Approx(employment_at(boundary + eps)).margin(1e-6));
  }
}

TEST_CASE("informal optimum degenerate cases") {
  SECTION("no penalty, no productivity loss: coincides with formal") {
    const FirmDecision d =
        informal_optimum(1.0, kTech, kSupply, make_policy());
    CHECK(d.employment == Catch::Approx(0.3625088).margin(1e-6));
    CHECK(d.status == FirmStatus::Informal);
  }
  SECTION("delta rescales productivity") {
    Policy p = make_policy();
    p.delta = 0.2;
    const FirmDecision d = informal_optimum(1.0, kTech, kSupply, p);
    const FirmDecision ref =
        formal_optimum_unconstrained(0.8, kTech, kSupply, 0.0);
    CHECK(d.employment == Catch::Approx(ref.employment).epsilon(1e-12));
    CHECK(d.profit == Catch::Approx(ref.profit).epsilon(1e-12));
  }
  SECTION("minimum wage does not constrain the informal firm") {
    Policy p = make_policy(0.0, 0.0, 0.9);
    const FirmDecision d = informal_optimum(1.0, kTech, kSupply, p);
    CHECK(d.employment == Catch::Approx(0.3625088).margin(1e-6));
  }
}

TEST_CASE("informal optimum with detection penalty vs grid oracle") {
  const Policy p = make_policy(0.0, 0.0, 0.0, 0.5, 0.1, 1.0, 2.0);
  const FirmDecision d = informal_optimum(1.0, kTech, kSupply, p);
  auto objective = [&](double l) {
    return profit_at(1.0, kTech, kSupply, p, FirmStatus::Informal, l);
  };
  // dense scan over (0, 2], step 1e-5, is the oracle
  const auto [l_star, profit] = oracles::grid_argmax(objective, 0.0, 2.0,
                                                     200001);
  CHECK(d.employment == Catch::Approx(l_star).margin(2e-5));
  CHECK(d.profit >= profit - 1e-9);
  // the penalty shrinks both employment and profit
  CHECK(d.employment < 0.3323808);  // phi=0 optimum at delta=0.1
  Policy no_fine = p;
  no_fine.phi = 0.0;
  CHECK(d.profit < informal_optimum(1.0, kTech, kSupply, no_fine).profit);
  CHECK(d.detection_prob == Catch::Approx(detection_prob(p.detection,
                                                         d.employment)));
}

TEST_CASE("informal employment never exceeds the no-fine optimum") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ua(0.2, 5.0), uphi(0.0, 2.0),
      ulbar(0.1, 2.0), ugam(1.0, 3.0), udel(0.0, 0.5);
  for (int i = 0; i < 40; ++i) {
    Policy p = make_policy(0.0, 0.0, 0.0, uphi(gen), udel(gen), ulbar(gen),
                           ugam(gen));
    const double a = ua(gen);
    const double l_hi =
        unconstrained_employment((1.0 - p.delta) * a, kTech, kSupply, 0.0);
    const FirmDecision d = informal_optimum(a, kTech, kSupply, p);
    CHECK(d.employment <= l_hi + 1e-12);
    CHECK(d.profit >= 0.0);  // shutting down is always available
  }
}

TEST_CASE("comparative statics of the optima") {
  // L* increasing in a, decreasing in tau
  double prev = 0.0;
  for (double a = 0.5; a < 4.0; a += 0.25) {
    const double l =
        formal_optimum_unconstrained(a, kTech, kSupply, 0.1).employment;
    CHECK(l > prev);
    prev = l;
  }
  prev = 1e9;
  for (double tau = 0.0; tau < 1.0; tau += 0.1) {
    const double l =
        formal_optimum_unconstrained(1.0, kTech, kSupply, tau).employment;
    CHECK(l < prev);
    prev = l;
  }
  // informal employment nonincreasing in phi and in 1/l_bar
  prev = 1e9;
  for (double phi = 0.0; phi <= 1.0; phi += 0.1) {
    const Policy p = make_policy(0.0, 0.0, 0.0, phi, 0.1, 1.0, 2.0);
    const double l = informal_optimum(1.0, kTech, kSupply, p).employment;
    CHECK(l <= prev + 1e-12);
    prev = l;
  }
  prev = 0.0;
  for (double l_bar = 0.2; l_bar <= 2.0; l_bar += 0.2) {
    const Policy p = make_policy(0.0, 0.0, 0.0, 0.5, 0.1, l_bar, 2.0);
    const double l = informal_optimum(1.0, kTech, kSupply, p).employment;
    CHECK(l >= prev - 1e-12);
    prev = l;
  }
}

TEST_CASE("profit_at fixtures") {
  CHECK(profit_at(1.0, kTech, kSupply, make_policy(0.0, 0.1),
                  FirmStatus::Formal, 0.0) == Catch::Approx(-0.1));
  CHECK(profit_at(1.0, kTech, kSupply, make_policy(), FirmStatus::Informal,
                  0.0) == 0.0);
  CHECK(profit_at(1.0, kTech, kSupply, make_policy(), FirmStatus::Formal,
                  0.36249) == Catch::Approx(0.42648).margin(1e-4));
  CHECK_THROWS_AS(profit_at(1.0, kTech, kSupply, make_policy(),
                            FirmStatus::Formal, -1.0),
                  std::domain_error);
}

TEST_CASE("oracle dominance over randomized parameter draws") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> ua(0.3, 4.0), ual(0.3, 0.8),
      ub(0.5, 2.0), ue(0.6, 4.0), ut(0.0, 0.4), uw(0.0, 1.0), uphi(0.0, 1.0),
      ulbar(0.2, 2.0), ugam(1.0, 3.0), udel(0.0, 0.4), ucf(0.0, 0.2);
  for (int i = 0; i < 20; ++i) {
    const double a = ua(gen);
    const ProductionTech tech{ual(gen)};
    const LaborSupply supply{ub(gen), ue(gen)};
    const Policy p = make_policy(ut(gen), ucf(gen), uw(gen), uphi(gen),
                                 udel(gen), ulbar(gen), ugam(gen));

    const FirmDecision fd = formal_optimum(a, tech, supply, p);
    const FirmDecision id = informal_optimum(a, tech, supply, p);
    const double span =
        4.0 * unconstrained_employment(a, tech, supply, 0.0) + 1.0;
    for (int g = 0; g <= 2000; ++g) {
      const double l = span * g / 2000;
      CHECK(fd.profit >=
            profit_at(a, tech, supply, p, FirmStatus::Formal, l) - 1e-9);
      CHECK(id.profit >=
            profit_at(a, tech, supply, p, FirmStatus::Informal, l) - 1e-9);
    }
  }
}

TEST_CASE("envelope: d profit / d a equals output at the optimum") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> ua(0.3, 4.0), ual(0.3, 0.8),
      ub(0.5, 2.0), ue(0.6, 4.0), ut(0.0, 0.4), udel(0.0, 0.4),
      uphi(0.0, 0.5), ulbar(0.3, 2.0), ugam(1.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double a = ua(gen);
    const ProductionTech tech{ual(gen)};
    const LaborSupply supply{ub(gen), ue(gen)};
    const Policy p = make_policy(ut(gen), 0.05, 0.0, uphi(gen), udel(gen),
                                 ulbar(gen), ugam(gen));
    const double h = 1e-5 * a;

    const double f_of_l = production_output(
        tech, 1.0, formal_optimum(a, tech, supply, p).employment);
    const double dformal = (formal_optimum(a + h, tech, supply, p).profit -
                            formal_optimum(a - h, tech, supply, p).profit) /
                           (2.0 * h);
    CHECK(dformal == Catch::Approx(f_of_l).epsilon(1e-4));

    const double f_informal =
        (1.0 - p.delta) *
        production_output(tech, 1.0,
                          informal_optimum(a, tech, supply, p).employment);
    const double dinformal =
        (informal_optimum(a + h, tech, supply, p).profit -
         informal_optimum(a - h, tech, supply, p).profit) /
        (2.0 * h);
    CHECK(dinformal == Catch::Approx(f_informal).epsilon(1e-4));
  }
}
