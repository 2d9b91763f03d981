#pragma once

#include "asymfield/analytic.hpp"
#include "asymfield/angles.hpp"
#include "asymfield/circuit.hpp"
#include "asymfield/emission.hpp"
#include "asymfield/enhancement.hpp"
#include "asymfield/errors.hpp"
#include "asymfield/model.hpp"
#include "asymfield/netlist.hpp"
#include "asymfield/netsolver.hpp"
#include "asymfield/presets.hpp"
#include "asymfield/selfcheck.hpp"
#include "asymfield/sweep.hpp"
#include "asymfield/templates.hpp"
#include "asymfield/version.hpp"
