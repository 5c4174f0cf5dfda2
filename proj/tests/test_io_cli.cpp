#include <catch2/catch_amalgamated.hpp>
#include "evw/evw.hpp"
