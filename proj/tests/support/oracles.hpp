#ifndef OPPLEARN_TESTS_ORACLES_HPP
#define OPPLEARN_TESTS_ORACLES_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Root of a monotone `fn` minus `target` on [lo, hi] by bisection.
double bisect(const std::function<double(double)>& fn, double target, double lo, double hi,
              int iterations = 200);

// Reflected output target for scheme "t1", "t2" or "t3" given raw sample outputs.
double opposite_output(const std::string& scheme, double y, const std::vector<double>& outputs);

struct MinedRow {
  std::size_t matched_row;
  double match_error;
  double target;
};

// Quadratic scan over all rows; ties resolve to the first index.
std::vector<MinedRow> brute_force_mine(const std::vector<double>& outputs,
                                       const std::string& scheme);

// Arithmetic mean of `rows` selected from `data`.
Eigen::RowVectorXd group_mean(const Eigen::MatrixXd& data, const std::vector<int>& rows);

// Ordinary least squares of targets on (1, inputs), solved in long double.
// Returns n_out x (d + 1) with the intercept in column 0.
Eigen::MatrixXd ols_fit(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);

}  // namespace oracle

#endif  // OPPLEARN_TESTS_ORACLES_HPP
