#pragma once

#include <random>

#include "onsager/metric.hpp"

namespace onsager::cli {

using Rng = std::mt19937_64;

// Connected reversible chain: random spanning tree plus extra edges, weights in [0.5, 2],
// stationary law proportional to U(0.5, 1.5) draws.
ReversibleChain random_chain(int n, Rng& rng);

// Interior point with every component at least floor / n.
VertexField random_point(int n, Rng& rng, double floor = 0.1);

// Mean-zero Gaussian potential.
VertexField random_potential(int n, Rng& rng);

// Rescale phi so that max_i |(L phi)_i| / p_i equals ratio.
VertexField scale_potential(const LocalGeometry& g, const VertexField& phi, double ratio);

// Case k cycles through the log-mean, the alpha = 1/2 mean and the beta = 1/2 geometric mean.
MobilityModel case_model(int k);

}  // namespace onsager::cli
