#pragma once

#include "ppmlink/channel.hpp"
#include "ppmlink/infotheory.hpp"
#include "ppmlink/linkbudget.hpp"
#include "ppmlink/logmath.hpp"
#include "ppmlink/optimize.hpp"
#include "ppmlink/oracle.hpp"
#include "ppmlink/table.hpp"
