#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scatter1d/spectra.hpp"
#include "scatter1d/verify.hpp"

using namespace scatter1d;

namespace {

const ResidualReport& report(const VerifySummary& s, const std::string& name) {
  for (const auto& r : s.reports) {
    if (r.identity_name == name) return r;
  }
  FAIL("missing report " << name);
  throw 0;
}

}  // namespace

TEST_CASE("grids") {
  const auto g = log_grid(0.1, 10.0, 3);
  REQUIRE(g.size() == 3);
  CHECK(g[1] == doctest::Approx(1.0));
  CHECK(linear_grid(0.0, 1.0, 5)[2] == doctest::Approx(0.5));
  CHECK(default_grid().size() == 100);
  CHECK_THROWS_AS(log_grid(-1.0, 1.0, 3), Error);
}

TEST_CASE("real barrier passes everything that applies") {
  const auto sys = ScatteringSystem::from_model(Barrier{5.0, 0.0, 1.0});
  const VerifySummary s = run_all(sys, default_grid());
  CHECK(s.all_passed());
  CHECK(report(s, "transmission_reciprocity").status == CheckStatus::Passed);
  CHECK(report(s, "unitarity").status == CheckStatus::Passed);
  CHECK(report(s, "unitarity").max_residual < 1e-12);
  CHECK(report(s, "pt_pseudo_unitarity").status == CheckStatus::NotApplicable);
  CHECK(report(s, "modulus_relations").status == CheckStatus::Passed);
  CHECK(report(s, "negative_k").status == CheckStatus::Passed);
}

TEST_CASE("complex delta: unitarity and modulus relations are not applicable") {
  const auto sys = ScatteringSystem::from_model(Delta{Complex{1.0, 0.7}});
  const VerifySummary s = run_all(sys, default_grid());
  CHECK(report(s, "unitarity").status == CheckStatus::NotApplicable);
  CHECK(report(s, "modulus_relations").status == CheckStatus::NotApplicable);
  CHECK(report(s, "transmission_reciprocity").status == CheckStatus::Passed);
  CHECK(s.all_passed());
}

TEST_CASE("PT mirror pair satisfies pseudo-unitarity") {
  const auto sys = ScatteringSystem::from_model(pt_mirror_pair(Complex{1.0, 0.5}, 1.0));
  const ResidualReport r = check_pt_pseudo_unitarity(sys, default_grid());
  CHECK(r.status == CheckStatus::Passed);
  CHECK(check_unitarity(sys, default_grid()).status == CheckStatus::NotApplicable);
  CHECK(check_modulus_relations(sys, default_grid()).status == CheckStatus::Passed);
}

TEST_CASE("anomalous point interaction: det M follows det B") {
  // det B = 2: transmission reciprocity fails, the determinant law holds.
  const PointInteractions model{{PointInteraction::constant(0.0, {2.0, 0.0, 0.5, 1.0})}};
  const auto sys = ScatteringSystem::from_model(model);
  CHECK_FALSE(sys.is_potential);
  CHECK(check_reciprocity(sys, default_grid()).status == CheckStatus::Passed);
  const ResidualReport tr = check_transmission_reciprocity(sys, default_grid());
  CHECK(tr.status == CheckStatus::Failed);
  CHECK(tr.max_residual > 0.1);
}

TEST_CASE("corrupted M11 fails the suite") {
  const auto sys = with_corrupted_m11(ScatteringSystem::from_model(Barrier{5.0, 0.0, 1.0}), Complex{1.001, 0.0});
  const VerifySummary s = run_all(sys, default_grid());
  CHECK_FALSE(s.all_passed());
  const ResidualReport& r = report(s, "transmission_reciprocity");
  CHECK(r.status == CheckStatus::Failed);
  CHECK(r.max_residual > 1e-4);
  CHECK(r.grid.size() == 100);
}

TEST_CASE("negative-k check against direct evaluation") {
  const auto sys = ScatteringSystem::from_model(MultiDelta{1.0, {Complex{1, 1}, Complex{-0.5, 0.2}}, {0.0, 0.8}});
  const ResidualReport r = check_negative_k(sys, log_grid(0.2, 5.0, 30));
  CHECK(r.status == CheckStatus::Passed);
  CHECK(r.max_residual < 1e-12);
}
