#include <doctest.h>
TEST_CASE("placeholder test_resonator") { CHECK(true); }
