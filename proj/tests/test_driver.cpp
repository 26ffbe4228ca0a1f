#include <doctest.h>
TEST_CASE("placeholder_driver") { CHECK(true); }
