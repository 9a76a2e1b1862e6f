#pragma once

#include "rado/increment/subspace.hpp"
#include "rado/increment/toy.hpp"
#include "rado/increment/trace.hpp"
#include "rado/increment/zp.hpp"
