#pragma once

#include "mmpass/errors.hpp"
#include "mmpass/network.hpp"
#include "mmpass/generate.hpp"
#include "mmpass/network_io.hpp"
#include "mmpass/lp.hpp"
#include "mmpass/solution.hpp"
#include "mmpass/formulations.hpp"
#include "mmpass/paths.hpp"
#include "mmpass/certify.hpp"
#include "mmpass/schedule.hpp"
#include "mmpass/bounds.hpp"
#include "mmpass/security.hpp"
#include "mmpass/experiments.hpp"
