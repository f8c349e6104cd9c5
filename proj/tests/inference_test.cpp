// Copyright 2026 The popnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "popnet/bn_io.hpp"
#include "popnet/errors.hpp"
#include "popnet/inference.hpp"
#include "test_support.hpp"

namespace popnet {
namespace {

namespace oracle = testing::oracle;

BayesianNetwork kenya() { return load_bn_file(testing::kenya_dir() / "attributes.bn"); }

TEST(Posterior, MatchesEnumerationOnRandomNetworks) {
  std::mt19937_64 rng(1234);
  int compared = 0;
  for (int n = 0; n < 200; ++n) {
    BayesianNetwork bn = testing::random_network(rng);
    for (int trial = 0; trial < 5; ++trial) {
      Evidence ev = testing::random_evidence(rng, bn, 3);
      double pe = oracle::evidence_probability(bn, ev);
      EXPECT_NEAR(probability_of_evidence(bn, ev), pe, 1e-9);
      auto all = oracle::posteriors(bn, ev);
      for (VarId q = 0; q < bn.size(); ++q) {
        if (pe == 0.0) {
          EXPECT_THROW(posterior(bn, ev, q), ZeroEvidenceError);
          continue;
        }
        const auto& expected = all[q];
        auto got = posterior(bn, ev, q);
        ASSERT_EQ(got.size(), expected.size());
        for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], expected[k], 1e-9);
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 1000);
}

TEST(Posterior, ObservedQueryIsPointMass) {
  BayesianNetwork bn = kenya();
  Evidence ev = Evidence::from_labels(bn, {{"gender", "female"}});
  auto p = posterior(bn, ev, bn.index_of("gender"));
  EXPECT_EQ(p, (std::vector<double>{0.0, 1.0}));
}

TEST(Posterior, RootWithoutEvidenceIsItsPrior) {
  BayesianNetwork bn = kenya();
  VarId loc = bn.index_of("location");
  auto p = posterior(bn, Evidence(bn.size()), loc);
  std::span<const double> prior = bn.row(loc, 0);
  ASSERT_EQ(p.size(), prior.size());
  for (std::size_t k = 0; k < p.size(); ++k) EXPECT_DOUBLE_EQ(p[k], prior[k]);
}

TEST(Posterior, YoungMenMarriageRate) {
  BayesianNetwork bn = kenya();
  Posterior p = posterior(
      bn, Evidence::from_labels(bn, {{"gender", "male"}, {"ageSlices", "15-19"}}),
      "maritalStatus");
  EXPECT_EQ(p.variable, "maritalStatus");
  EXPECT_NEAR(p.probabilities[1], 0.019, 1e-12);
  EXPECT_NEAR(p.probabilities[0], 0.981, 1e-12);
}

TEST(Posterior, ExactAgeDeterminesTheSlice) {
  BayesianNetwork bn = kenya();
  Evidence ev = Evidence::from_labels(bn, {{"gender", "male"}, {"ageDetail", "15"}});
  EXPECT_NEAR(posterior(bn, ev, "maritalStatus").probabilities[1], 0.019, 1e-12);
  auto slice = posterior(bn, ev, bn.index_of("ageSlices"));
  EXPECT_NEAR(slice[1], 1.0, 1e-12);
}

TEST(Posterior, DownstreamEvidenceUpdatesParents) {
  BayesianNetwork bn = kenya();
  Evidence ev = Evidence::from_labels(bn, {{"maritalStatus", "yes"}});
  auto age = posterior(bn, ev, bn.index_of("ageSlices"));
  EXPECT_NEAR(age[0], 0.0, 1e-15);
  // p(gender | married) from p(slice) and the marital table by hand.
  VarId slices = bn.index_of("ageSlices"), marital = bn.index_of("maritalStatus");
  auto slice_prior = posterior(bn, Evidence(bn.size()), slices);
  double married[2] = {0.0, 0.0};
  for (int g = 0; g < 2; ++g)
    for (std::size_t s = 0; s < slice_prior.size(); ++s)
      married[g] += 0.5 * slice_prior[s] * bn.row(marital, g * slice_prior.size() + s)[1];
  auto got = posterior(bn, ev, bn.index_of("gender"));
  EXPECT_NEAR(got[0], married[0] / (married[0] + married[1]), 1e-12);
}

TEST(Posterior, ImpossibleEvidenceThrows) {
  BayesianNetwork bn = kenya();
  Evidence ev =
      Evidence::from_labels(bn, {{"ageSlices", "0-14"}, {"maritalStatus", "yes"}});
  EXPECT_EQ(probability_of_evidence(bn, ev), 0.0);
  EXPECT_THROW(posterior(bn, ev, "gender"), ZeroEvidenceError);
}

TEST(Posterior, UnknownNamesThrow) {
  BayesianNetwork bn = kenya();
  EXPECT_THROW(posterior(bn, Evidence(bn.size()), "income"), UnknownVariableError);
  EXPECT_THROW(posterior(bn, Evidence(bn.size()), VarId{999}), UnknownVariableError);
  EXPECT_THROW(Evidence::from_labels(bn, {{"gender", "other"}}), UnknownVariableError);
}

TEST(Evidence, ConflictingAssertionThrows) {
  BayesianNetwork bn = kenya();
  Evidence ev(bn.size());
  ev.set(bn, "gender", "male");
  EXPECT_NO_THROW(ev.set(bn, "gender", "male"));
  EXPECT_THROW(ev.set(bn, "gender", "female"), Error);
  ev.clear(bn.index_of("gender"));
  EXPECT_TRUE(ev.empty());
}

TEST(JointProbability, MatchesChainRuleAndSumsToOne) {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 50; ++n) {
    BayesianNetwork bn = testing::random_network(rng, {.max_variables = 6});
    double total = 0.0;
    for (const auto& a : oracle::all_assignments(bn)) {
      double p = joint_probability(bn, a);
      EXPECT_NEAR(p, oracle::joint(bn, a), 1e-15);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(JointProbability, IncompleteAssignmentThrows) {
  BayesianNetwork bn = kenya();
  std::vector<int> partial(bn.size() - 1, 0);
  EXPECT_THROW(joint_probability(bn, partial), IncompleteAssignmentError);
  std::vector<int> unset(bn.size(), 0);
  unset[2] = -1;
  EXPECT_THROW(joint_probability(bn, unset), IncompleteAssignmentError);
}

TEST(ProbabilityOfEvidence, EmptyEvidenceIsOne) {
  EXPECT_NEAR(probability_of_evidence(kenya(), Evidence{}), 1.0, 1e-12);
}

}  // namespace
}  // namespace popnet
