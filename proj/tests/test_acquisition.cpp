#include <doctest.h>
TEST_CASE("placeholder_acquisition") { CHECK(true); }
