#pragma once

#include "subtile/algebra.hpp"
#include "subtile/designer.hpp"
#include "subtile/dyadic.hpp"
#include "subtile/errors.hpp"
#include "subtile/geometry.hpp"
#include "subtile/interval.hpp"
#include "subtile/io.hpp"
#include "subtile/recognize.hpp"
#include "subtile/sequence.hpp"
#include "subtile/series.hpp"
#include "subtile/substitution.hpp"
#include "subtile/word.hpp"
