#pragma once

#include "altproj/analysis.hpp"
#include "altproj/divergence.hpp"
#include "altproj/errors.hpp"
#include "altproj/io.hpp"
#include "altproj/iteration.hpp"
#include "altproj/kaczmarz.hpp"
#include "altproj/linalg.hpp"
#include "altproj/random.hpp"
#include "altproj/schedule.hpp"
#include "altproj/word.hpp"
