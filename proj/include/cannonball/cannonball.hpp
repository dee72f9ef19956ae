#pragma once

#include "cannonball/acceptance.hpp"
#include "cannonball/ap.hpp"
#include "cannonball/bigint.hpp"
#include "cannonball/cache.hpp"
#include "cannonball/characters.hpp"
#include "cannonball/config.hpp"
#include "cannonball/csv.hpp"
#include "cannonball/equidist.hpp"
#include "cannonball/errors.hpp"
#include "cannonball/exact.hpp"
#include "cannonball/fit.hpp"
#include "cannonball/parallel.hpp"
#include "cannonball/series.hpp"
