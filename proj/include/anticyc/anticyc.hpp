#pragma once

#include "anticyc/error.hpp"
#include "anticyc/integer.hpp"
#include "anticyc/padic.hpp"
#include "anticyc/cyclotomic.hpp"
#include "anticyc/series.hpp"
#include "anticyc/measure.hpp"
#include "anticyc/quadratic.hpp"
#include "anticyc/characters.hpp"
#include "anticyc/modular.hpp"
#include "anticyc/assembly.hpp"
