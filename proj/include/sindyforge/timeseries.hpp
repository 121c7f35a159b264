#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "sindyforge/errors.hpp"

namespace sindyforge {

/// Uniformly sampled multichannel record: states (one column per channel),
/// inputs, and optionally per-channel time derivatives. Values are never
/// mutated after construction; treat instances as immutable and copy when a
/// modified version is needed.
struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;
    Eigen::MatrixXd states;                      // T x n
    Eigen::MatrixXd inputs;                      // T x m
    std::optional<Eigen::MatrixXd> derivatives;  // T x n when present
    std::vector<std::string> channel_names;      // state names then input names

    Eigen::Index rows() const { return states.rows(); }
    Eigen::Index n_states() const { return states.cols(); }
    Eigen::Index n_inputs() const { return inputs.cols(); }
    bool has_derivatives() const { return derivatives.has_value(); }
    double time(Eigen::Index k) const { return t0 + static_cast<double>(k) * dt; }

    const std::string& state_name(Eigen::Index i) const { return channel_names.at(static_cast<std::size_t>(i)); }
    const std::string& input_name(Eigen::Index j) const {
        return channel_names.at(static_cast<std::size_t>(n_states() + j));
    }

    /// Enforces the record invariants: T >= 2, dt > 0, matching row counts,
    /// derivative shape, and a name per channel. Split segments may be empty
    /// (T = 0); everything that consumes a record for fitting or simulation
    /// validates first.
    void validate() const;

    bool empty() const { return states.rows() == 0; }
};

/// Contiguous train/validation/test partition lengths. test_len may be zero
/// when the test record lives in a separate file.
struct SplitSpec {
    Eigen::Index train_len = 0;
    Eigen::Index valid_len = 0;
    Eigen::Index test_len = 0;

    void validate(Eigen::Index total_rows) const;
};

/// Column-name mapping for CSV ingestion. Either `time_column` must name a
/// column or `dt` must be given. Derivative columns are picked up when every
/// state has a matching `<state>_dot` column.
struct CsvSchema {
    std::optional<std::string> time_column = "t";
    std::optional<double> dt;  // used when time_column is absent
    double t0 = 0.0;           // start time when no time column is present
    std::vector<std::string> state_columns;
    std::vector<std::string> input_columns;
};

Trajectory load_csv(const std::string& path, const CsvSchema& schema);

void save_csv(const Trajectory& traj, const std::string& path);

/// Order-preserving, non-overlapping contiguous segments. Each segment's t0
/// reflects its offset into the source record.
std::tuple<Trajectory, Trajectory, Trajectory> split(const Trajectory& traj, const SplitSpec& spec);

} // namespace sindyforge
