#ifndef LITERALE_LITERALE_HPP
#define LITERALE_LITERALE_HPP

#include "literale/analysis.hpp"
#include "literale/data.hpp"
#include "literale/eval.hpp"
#include "literale/fusion.hpp"
#include "literale/loss.hpp"
#include "literale/model.hpp"
#include "literale/ops.hpp"
#include "literale/params.hpp"
#include "literale/reciprocal.hpp"
#include "literale/score.hpp"
#include "literale/tensor.hpp"
#include "literale/train.hpp"

#endif
