#pragma once

// Umbrella header for the complete-monotonicity toolkit.

#include "logmono/checker.hpp"
#include "logmono/families.hpp"
#include "logmono/series.hpp"
#include "logmono/specfun.hpp"
#include "logmono/theorem.hpp"
