#pragma once

#include "spinnet/dynamics.hpp"
#include "spinnet/entanglement.hpp"
#include "spinnet/error.hpp"
#include "spinnet/linalg.hpp"
#include "spinnet/montecarlo.hpp"
#include "spinnet/network.hpp"
#include "spinnet/network_io.hpp"
#include "spinnet/protocols.hpp"
#include "spinnet/random.hpp"
#include "spinnet/report.hpp"
#include "spinnet/version.hpp"
