#pragma once

#include "creativity/cin.hpp"
#include "creativity/distance.hpp"
#include "creativity/error.hpp"
#include "creativity/experiments.hpp"
#include "creativity/graph.hpp"
#include "creativity/io.hpp"
#include "creativity/model.hpp"
#include "creativity/output.hpp"
#include "creativity/pipeline.hpp"
#include "creativity/scoring.hpp"
#include "creativity/similarity.hpp"
#include "creativity/synthetic.hpp"
