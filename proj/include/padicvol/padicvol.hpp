#pragma once

// Umbrella header.

#include "common.hpp"
#include "cyclo.hpp"
#include "field.hpp"
#include "fourier.hpp"
#include "group.hpp"
#include "hasse.hpp"
#include "integrate.hpp"
#include "linalg.hpp"
#include "neron.hpp"
#include "orbifold.hpp"
#include "parallel.hpp"
#include "poly.hpp"
#include "report.hpp"
#include "series.hpp"
#include "torsor.hpp"
#include "volume.hpp"
