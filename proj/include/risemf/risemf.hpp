#pragma once

#include "risemf/compliance.hpp"
#include "risemf/efield.hpp"
#include "risemf/error.hpp"
#include "risemf/geometry.hpp"
#include "risemf/oracle.hpp"
#include "risemf/propagation.hpp"
#include "risemf/regulatory.hpp"
