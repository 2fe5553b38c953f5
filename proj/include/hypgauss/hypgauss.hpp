#pragma once

#include "hypgauss/codes.hpp"
#include "hypgauss/error.hpp"
#include "hypgauss/gauss1d.hpp"
#include "hypgauss/gaussnd.hpp"
#include "hypgauss/hypgeo.hpp"
#include "hypgauss/io.hpp"
#include "hypgauss/mcsim.hpp"
#include "hypgauss/rng.hpp"
#include "hypgauss/specfun.hpp"
