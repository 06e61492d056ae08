#pragma once

#include "assign.hpp"
#include "clustering.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "experiments.hpp"
#include "graph_io.hpp"
#include "init.hpp"
#include "kmeans.hpp"
#include "parallel.hpp"
#include "ppm.hpp"
#include "rng.hpp"
#include "sbm.hpp"
#include "score_matrix.hpp"
#include "sparse_adjacency.hpp"
#include "svg_plot.hpp"
