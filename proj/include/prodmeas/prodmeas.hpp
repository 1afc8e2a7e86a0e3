#pragma once

#include "prodmeas/banach_space.hpp"
#include "prodmeas/bounds.hpp"
#include "prodmeas/cube_decomp.hpp"
#include "prodmeas/errors.hpp"
#include "prodmeas/factor_space.hpp"
#include "prodmeas/lp_space.hpp"
#include "prodmeas/product_arith.hpp"
#include "prodmeas/product_measure.hpp"
#include "prodmeas/product_value.hpp"
#include "prodmeas/rational.hpp"
#include "prodmeas/rectangle.hpp"
#include "prodmeas/serialize.hpp"
