#include <doctest.h>

#include "advcsp/errors.hpp"
#include "advcsp/verify.hpp"

using namespace advcsp;

TEST_CASE("every suite passes") {
  for (const auto& name : suite_names()) {
    const auto r = run_suite(name, 10, 99);
    CAPTURE(name);
    CAPTURE(r.first_failure);
    CHECK(r.checks > 0);
    CHECK(r.passed());
  }
}

TEST_CASE("unknown suite") {
  CHECK_THROWS_AS(run_suite("nope", 1, 1), InputError);
}
