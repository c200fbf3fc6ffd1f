#pragma once

#include "ilbat/bat.hpp"
#include "ilbat/connectivity.hpp"
#include "ilbat/disjoint_sets.hpp"
#include "ilbat/engine.hpp"
#include "ilbat/error.hpp"
#include "ilbat/format.hpp"
#include "ilbat/network.hpp"
#include "ilbat/oracle.hpp"
#include "ilbat/report.hpp"
#include "ilbat/state_vector.hpp"
#include "ilbat/trace.hpp"
#include "ilbat/version.hpp"
