#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace klauskit {

// Limited-memory BFGS with a strong-Wolfe line search. The objective
// callback fills the gradient and returns the function value.
struct lbfgs_config {
    int history = 8;
    int max_iterations = 300;
    double g_epsilon = 1e-9;  // stop when ||g|| < g_epsilon * max(1, ||x||)
    double f_epsilon = 1e-10; // stop when the objective improves less than this
    int max_linesearch = 40;
};

struct lbfgs_result {
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

using lbfgs_objective = std::function<double(const std::vector<double>&, std::vector<double>&)>;

lbfgs_result lbfgs_minimize(std::vector<double>& x, const lbfgs_objective& objective,
                            const lbfgs_config& cfg = {});

} // namespace klauskit
