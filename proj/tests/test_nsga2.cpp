#include <doctest.h>
TEST_CASE("placeholder_nsga2") { CHECK(true); }
