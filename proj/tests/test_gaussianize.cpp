#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "psilingam/data_matrix.hpp"
#include "psilingam/gaussianize.hpp"
#include "psilingam/rng.hpp"

using namespace psilingam;
using Catch::Approx;

namespace {

Eigen::VectorXd exp_column(int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = -std::log1p(-rng.uniform01());
    return x;
}

/// Output must be a nondecreasing function of the input; distinct inputs may
/// only collide at the Winsorized extremes.
bool monotone_in_input(const Eigen::VectorXd& in, const Eigen::VectorXd& out) {
    std::vector<int> idx(static_cast<std::size_t>(in.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return in[a] < in[b]; });
    for (std::size_t k = 1; k < idx.size(); ++k) {
        if (out[idx[k]] < out[idx[k - 1]]) return false;
        if (in[idx[k]] == in[idx[k - 1]] && out[idx[k]] != out[idx[k - 1]]) return false;
    }
    return true;
}

} // namespace

TEST_CASE("winsorization level formula") {
    // 1 / (4 n^(1/4) sqrt(pi log n)) at n = 1000
    const double expected = 1.0 / (4.0 * std::pow(1000.0, 0.25) * std::sqrt(M_PI * std::log(1000.0)));
    REQUIRE(winsorization_level(1000) == Approx(expected).epsilon(1e-15));
    REQUIRE(winsorization_level(1000) > 0.0);
    REQUIRE(winsorization_level(1000) < 0.5);
}

TEST_CASE("transform_params holds the truncation and rescaling targets") {
    Eigen::MatrixXd values(50, 2);
    values.col(0) = exp_column(50, 1);
    values.col(1) = 4.0 * exp_column(50, 2).array() + 2.0;
    const DataMatrix data = make_data_matrix(values);
    const TransformParams params = transform_params(data);
    REQUIRE(params.truncation > 0.0);
    REQUIRE(params.truncation < 0.5);
    REQUIRE(params.location.size() == 2);
    for (int j = 0; j < 2; ++j) {
        REQUIRE(params.scale[j] > 0.0);
        REQUIRE(params.location[j] == Approx(values.col(j).mean()).margin(1e-12));
        REQUIRE(params.scale[j] == Approx(sample_sd(values.col(j))).margin(1e-12));
    }
}

TEST_CASE("nonparanormal_transform maps the median of [1,2,3] to the mean") {
    Eigen::MatrixXd values(3, 2);
    values << 1, 4, 2, 9, 3, 5;
    const DataMatrix out = nonparanormal_transform(make_data_matrix(values));
    REQUIRE(out.values(1, 0) == Approx(2.0).margin(1e-12));
    // symmetric probit image around the mean
    REQUIRE(out.values(2, 0) - 2.0 == Approx(2.0 - out.values(0, 0)).margin(1e-12));
}

TEST_CASE("nonparanormal_transform preserves column moments") {
    Eigen::MatrixXd values(500, 2);
    values.col(0) = exp_column(500, 11);
    values.col(1) = exp_column(500, 12).array() * 3.0 - 1.0;
    const DataMatrix data = make_data_matrix(values);
    const DataMatrix out = nonparanormal_transform(data);
    for (Eigen::Index j = 0; j < 2; ++j) {
        REQUIRE(out.values.col(j).mean() == Approx(data.values.col(j).mean()).margin(1e-9));
        REQUIRE(sample_sd(out.values.col(j)) == Approx(sample_sd(data.values.col(j))).margin(1e-9));
    }
}

TEST_CASE("monotone transforms of a column yield the same ranks and probit image") {
    Eigen::MatrixXd values(300, 2);
    values.col(0) = exp_column(300, 21);
    values.col(1) = exp_column(300, 22);
    const DataMatrix base = make_data_matrix(values);

    Eigen::MatrixXd transformed = values;
    transformed.col(0) = values.col(0).array().exp(); // strictly increasing map
    const DataMatrix mapped = make_data_matrix(transformed);

    const DataMatrix out_base = nonparanormal_transform(base);
    const DataMatrix out_mapped = nonparanormal_transform(mapped);

    // identical ranks, hence identical standardized outputs
    const Eigen::VectorXd a = standardize(out_base.values.col(0));
    const Eigen::VectorXd b = standardize(out_mapped.values.col(0));
    REQUIRE((a - b).cwiseAbs().maxCoeff() < 1e-12);
    // untouched column is bit-identical
    REQUIRE((out_base.values.col(1) - out_mapped.values.col(1)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rank structure is preserved, ties map to equal outputs") {
    Eigen::MatrixXd values(9, 2);
    values.col(0) << 3, 1, 4, 1, 5, 9, 2, 6, 5; // contains ties
    values.col(1) << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    const DataMatrix data = make_data_matrix(values);
    const DataMatrix out = nonparanormal_transform(data);
    for (Eigen::Index j = 0; j < 2; ++j)
        REQUIRE(monotone_in_input(data.values.col(j), out.values.col(j)));
    REQUIRE(out.values(1, 0) == out.values(3, 0)); // tied inputs -> equal outputs
    REQUIRE(out.values(4, 0) == out.values(8, 0));
}

TEST_CASE("transformed exponential column passes the Gaussianity check") {
    Eigen::MatrixXd values(1000, 2);
    values.col(0) = exp_column(1000, 31);
    values.col(1) = exp_column(1000, 32);
    const DataMatrix out = nonparanormal_transform(make_data_matrix(values));
    const auto stats = anderson_darling(out);
    REQUIRE(stats[0] <= kAndersonDarlingCrit01);
    REQUIRE(stats[1] <= kAndersonDarlingCrit01);
}
