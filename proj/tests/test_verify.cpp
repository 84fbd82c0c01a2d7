#include <gtest/gtest.h>

#include "wtl/verify.hpp"

using namespace wtl::verify;

TEST(Verify, DefaultSuitesPass) {
  for (const auto& r : run_all({})) {
    EXPECT_TRUE(r.passed()) << r.name << ": " << r.counterexample;
    EXPECT_GT(r.cases, 0u);
  }
}

TEST(Verify, SuiteSizesMatchSweep) {
  EXPECT_EQ(verify_tail_sum({}).cases, 1000u);
  EXPECT_EQ(verify_incomplete_gamma({}).cases, 200u);
  EXPECT_EQ(verify_power_exp({}).cases, 1000u);
}

TEST(Verify, InjectedFaultIsDetected) {
  VerifyOptions opt;
  opt.fault_scale = 0.9;
  std::size_t failed = 0;
  for (const auto& r : run_all(opt))
    if (!r.passed()) {
      ++failed;
      EXPECT_FALSE(r.counterexample.empty()) << r.name;
    }
  EXPECT_GT(failed, 0u);
}

TEST(Verify, LargerSweepSameVerdict) {
  VerifyOptions opt;
  opt.samples = 2000;
  EXPECT_TRUE(verify_incomplete_gamma(opt).passed());
  EXPECT_TRUE(verify_power_exp(opt).passed());
}
