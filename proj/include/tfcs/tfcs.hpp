#pragma once

// Core library (needs Eigen and FFTW only).
#include "tfcs/error.hpp"
#include "tfcs/ifest.hpp"
#include "tfcs/imagequant.hpp"
#include "tfcs/l1.hpp"
#include "tfcs/mask.hpp"
#include "tfcs/pgm.hpp"
#include "tfcs/signals.hpp"
#include "tfcs/tfa.hpp"
#include "tfcs/tracks_csv.hpp"
#include "tfcs/tv.hpp"
