#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <string>

namespace {

// Prints one PASS/FAIL line per acceptance criterion as it finishes.
struct CriterionReporter : doctest::IReporter {
  std::string current;

  explicit CriterionReporter(const doctest::ContextOptions&) {}

  void report_query(const doctest::QueryData&) override {}
  void test_run_start() override {}
  void test_run_end(const doctest::TestRunStats& stats) override {
    std::printf("acceptance: %u criterion(s), %u failed\n", stats.numTestCases,
                stats.numTestCasesFailed);
    std::fflush(stdout);
  }
  void test_case_start(const doctest::TestCaseData& data) override {
    current = data.m_name;
  }
  void test_case_reenter(const doctest::TestCaseData&) override {}
  void test_case_end(const doctest::CurrentTestCaseStats& stats) override {
    std::printf("[%s] %s\n", stats.testCaseSuccess ? "PASS" : "FAIL",
                current.c_str());
    std::fflush(stdout);
  }
  void test_case_exception(const doctest::TestCaseException&) override {}
  void subcase_start(const doctest::SubcaseSignature&) override {}
  void subcase_end() override {}
  void log_assert(const doctest::AssertData&) override {}
  void log_message(const doctest::MessageData&) override {}
  void test_case_skipped(const doctest::TestCaseData&) override {}
};

}  // namespace

REGISTER_LISTENER("criteria", 1, CriterionReporter);

int main(int argc, char** argv) {
  doctest::Context context(argc, argv);
  return context.run();
}
