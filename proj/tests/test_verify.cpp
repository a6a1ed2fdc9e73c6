#include "cubeleonard/verify.hpp"

#include <gtest/gtest.h>

using namespace cubeleonard;

TEST(CheckLog, Detail) {
  CheckLog log;
  log.expect(true, "a");
  EXPECT_EQ(log.finish("s").detail, "1 checks passed");
  log.expect(false, "b");
  log.guarded("c", [] { throw std::runtime_error("boom"); });
  auto r = log.finish("s");
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.detail, "2 of 3 checks failed: b; c: boom");
}

TEST(Catalog, Selection) {
  EXPECT_THROW(suite_info("nope"), std::invalid_argument);
  auto even = default_suites(4);
  EXPECT_NE(std::find(even.begin(), even.end(), "leonard-even"), even.end());
  EXPECT_EQ(std::find(even.begin(), even.end(), "transport"), even.end());
  auto odd = default_suites(5);
  EXPECT_EQ(std::find(odd.begin(), odd.end(), "leonard-even"), odd.end());
  EXPECT_NE(std::find(odd.begin(), odd.end(), "odd-types"), odd.end());
}

TEST(Catalog, Caps) {
  VerifyOptions opt;
  EXPECT_THROW(check_suite_allowed("idempotents", 9, opt), std::invalid_argument);
  EXPECT_NO_THROW(check_suite_allowed("idempotents", 8, opt));
  EXPECT_THROW(check_suite_allowed("relations", 11, opt), std::invalid_argument);
  EXPECT_THROW(check_suite_allowed("leonard-even", 5, opt), std::invalid_argument);
  EXPECT_THROW(check_suite_allowed("transport", 4, opt), std::invalid_argument);
  opt.force = true;
  EXPECT_NO_THROW(check_suite_allowed("idempotents", 9, opt));
}

TEST(Suites, EvenCubePasses) {
  VerifyOptions opt;
  for (const char* s : {"relations", "wam", "skew", "idempotents", "decomposition", "leonard-even", "canonical"}) {
    auto r = run_suite(s, 6, opt);
    EXPECT_TRUE(r.pass) << s << ": " << r.detail;
  }
  EXPECT_FALSE(run_suite("leonard-even", 6, opt).certificates.empty());
}

TEST(Suites, OddCubeStructural) {
  VerifyOptions opt;
  for (const char* s : {"relations", "wam", "skew", "transport", "decomposition"}) {
    auto r = run_suite(s, 7, opt);
    EXPECT_TRUE(r.pass) << s << ": " << r.detail;
  }
  auto lq = run_suite("leonard-quotient", 7, opt);
  EXPECT_TRUE(lq.pass) << lq.detail;
  ASSERT_EQ(lq.certificates.size(), 1u);
  EXPECT_EQ(lq.certificates[0].verdict, "z-normalized-AB");
}

TEST(Suites, SkewAtNine) {
  auto r = run_suite("skew", 9, VerifyOptions{});
  EXPECT_TRUE(r.pass) << r.detail;
  EXPECT_NE(r.detail.find("sampled"), std::string::npos);
}

TEST(Suites, FailuresAreReported) {
  VerifyOptions opt;
  auto r = run_suite("odd-types", 5, opt);
  EXPECT_FALSE(r.pass);
  EXPECT_NE(r.detail.find("r1#0"), std::string::npos);
  opt.diameter_bound = 0;
  EXPECT_TRUE(run_suite("sl2-factory", 5, opt).pass);
}

TEST(Report, DeterministicJson) {
  VerifyOptions opt;
  auto a = verify(4, {"decomposition", "leonard-even"}, opt);
  auto b = verify(4, {"decomposition", "leonard-even"}, opt);
  EXPECT_EQ(a.to_json(false).dump(), b.to_json(false).dump());
  auto j = a.to_json();
  EXPECT_EQ(j["D"], 4);
  EXPECT_EQ(j["parity"], "even");
  EXPECT_EQ(j["status"], "pass");
  EXPECT_TRUE(j.contains("timing"));
  EXPECT_EQ(j["suites"].size(), 2u);
  auto certs = a.certificates();
  EXPECT_TRUE(std::is_sorted(certs.begin(), certs.end(),
                             [](const auto& x, const auto& y) { return x.module_id < y.module_id; }));
}

TEST(Report, OverallStatus) {
  VerifyOptions opt;
  auto rep = verify(5, {"relations", "odd-types"}, opt);
  EXPECT_FALSE(rep.pass());
  EXPECT_NE(rep.to_text().find("overall: FAIL"), std::string::npos);
  EXPECT_TRUE(verify(5, {"relations"}, opt).pass());
}
