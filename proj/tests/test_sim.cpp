#include <catch2/catch_amalgamated.hpp>
#include "blfctl/blfctl.hpp"
