#pragma once

#include "fsq/constructions.hpp"
#include "fsq/core.hpp"
#include "fsq/equivalence.hpp"
#include "fsq/io.hpp"
#include "fsq/plex.hpp"
#include "fsq/search.hpp"
#include "fsq/serialize.hpp"
#include "fsq/verify.hpp"
