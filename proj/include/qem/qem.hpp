#pragma once

#include "qem/biquat.hpp"
#include "qem/differential.hpp"
#include "qem/errors.hpp"
#include "qem/expr.hpp"
#include "qem/harness.hpp"
#include "qem/jet.hpp"
#include "qem/maxwell.hpp"
#include "qem/medium.hpp"
#include "qem/random.hpp"
#include "qem/report.hpp"
#include "qem/scenario.hpp"
#include "qem/version.hpp"
