#pragma once

#include "scsa/error.hpp"
#include "scsa/image.hpp"
#include "scsa/imageio.hpp"
#include "scsa/metrics.hpp"
#include "scsa/noise.hpp"
#include "scsa/parallel.hpp"
#include "scsa/scsa1d.hpp"
#include "scsa/scsa2d.hpp"
#include "scsa/spectral.hpp"
#include "scsa/synth.hpp"
#include "scsa/tuning.hpp"
