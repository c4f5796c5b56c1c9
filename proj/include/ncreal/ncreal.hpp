#ifndef NCREAL_NCREAL_HPP
#define NCREAL_NCREAL_HPP

#include <ncreal/rational.hpp>
#include <ncreal/matrix.hpp>
#include <ncreal/block_map.hpp>
#include <ncreal/tensor.hpp>
#include <ncreal/point.hpp>
#include <ncreal/random.hpp>
#include <ncreal/algebra.hpp>
#include <ncreal/expr.hpp>
#include <ncreal/realization.hpp>
#include <ncreal/subspace.hpp>
#include <ncreal/synthesis.hpp>
#include <ncreal/word.hpp>
#include <ncreal/lla.hpp>
#include <ncreal/series.hpp>
#include <ncreal/delta.hpp>
#include <ncreal/harness.hpp>
#include <ncreal/generate.hpp>
#include <ncreal/json_io.hpp>
#include <ncreal/selftest.hpp>

#endif  // NCREAL_NCREAL_HPP
