#include "sindyforge/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sindyforge/util.hpp"

namespace sindyforge {

void Trajectory::validate() const {
    const Eigen::Index T = states.rows();
    if (T < 2) throw DataError("trajectory must have at least 2 samples, got " + std::to_string(T));
    if (!(dt > 0.0)) throw DataError("trajectory dt must be positive");
    if (inputs.rows() != T) throw DataError("state/input row counts differ");
    if (derivatives && (derivatives->rows() != T || derivatives->cols() != states.cols()))
        throw DataError("derivative matrix shape does not match states");
    if (static_cast<Eigen::Index>(channel_names.size()) != states.cols() + inputs.cols())
        throw DataError("expected one channel name per state and input column");
}

void SplitSpec::validate(Eigen::Index total_rows) const {
    if (train_len < 2) throw ConfigError("split: train_len must be at least 2");
    if (valid_len < 0 || test_len < 0) throw ConfigError("split: lengths must be nonnegative");
    if (train_len + valid_len + test_len > total_rows)
        throw ConfigError("split: lengths exceed record length " + std::to_string(total_rows));
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\r' || *(end - 1) == '\t')) --end;
    double value = 0.0;
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw DataError("csv: non-numeric cell in column '" + column + "' at data row " + std::to_string(row));
    return value;
}

} // namespace

Trajectory load_csv(const std::string& path, const CsvSchema& schema) {
    if (schema.state_columns.empty()) throw ConfigError("csv schema: at least one state column required");
    if (schema.input_columns.empty()) throw ConfigError("csv schema: at least one input column required");
    if (!schema.time_column && !schema.dt) throw ConfigError("csv schema: need a time column or an explicit dt");

    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open csv file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("csv: empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_line(line);

    auto column_index = [&](const std::string& name) -> Eigen::Index {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ConfigError("csv schema: missing column '" + name + "' in " + path);
        return static_cast<Eigen::Index>(it - header.begin());
    };

    std::optional<Eigen::Index> time_col;
    if (schema.time_column) {
        // When dt is also given the time column is optional in the file.
        auto it = std::find(header.begin(), header.end(), *schema.time_column);
        if (it != header.end()) time_col = static_cast<Eigen::Index>(it - header.begin());
        else if (!schema.dt) throw ConfigError("csv schema: missing column '" + *schema.time_column + "' in " + path);
    }

    std::vector<Eigen::Index> state_cols, input_cols;
    for (const auto& c : schema.state_columns) state_cols.push_back(column_index(c));
    for (const auto& c : schema.input_columns) input_cols.push_back(column_index(c));

    // Derivative columns are loaded when every state has one.
    std::vector<Eigen::Index> deriv_cols;
    bool have_derivs = true;
    for (const auto& c : schema.state_columns) {
        auto it = std::find(header.begin(), header.end(), c + "_dot");
        if (it == header.end()) {
            have_derivs = false;
            break;
        }
        deriv_cols.push_back(static_cast<Eigen::Index>(it - header.begin()));
    }

    std::vector<std::vector<double>> rows;
    std::size_t row_idx = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size())
            throw DataError("csv: row " + std::to_string(row_idx) + " has " + std::to_string(cells.size()) +
                            " cells, header has " + std::to_string(header.size()));
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) row[c] = parse_cell(cells[c], row_idx, header[c]);
        rows.push_back(std::move(row));
        ++row_idx;
    }
    const auto T = static_cast<Eigen::Index>(rows.size());
    if (T < 2) throw DataError("csv: need at least 2 data rows, got " + std::to_string(T) + " in " + path);

    Trajectory traj;
    if (time_col) {
        std::vector<double> steps(static_cast<std::size_t>(T) - 1);
        for (Eigen::Index k = 0; k + 1 < T; ++k)
            steps[static_cast<std::size_t>(k)] = rows[k + 1][static_cast<std::size_t>(*time_col)] -
                                                 rows[k][static_cast<std::size_t>(*time_col)];
        std::vector<double> sorted = steps;
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        if (!(median > 0.0)) throw DataError("csv: time column is not strictly increasing");
        for (std::size_t k = 0; k < steps.size(); ++k) {
            if (std::abs(steps[k] - median) > 1e-6 * std::abs(median))
                throw DataError("csv: non-uniform time grid at data row " + std::to_string(k + 1) +
                                " (step " + format_double(steps[k]) + ", median " + format_double(median) + ")");
        }
        traj.t0 = rows[0][static_cast<std::size_t>(*time_col)];
        traj.dt = median;
    } else {
        traj.t0 = schema.t0;
        traj.dt = *schema.dt;
        if (!(traj.dt > 0.0)) throw ConfigError("csv schema: dt must be positive");
    }

    const auto n = static_cast<Eigen::Index>(state_cols.size());
    const auto m = static_cast<Eigen::Index>(input_cols.size());
    traj.states.resize(T, n);
    traj.inputs.resize(T, m);
    for (Eigen::Index k = 0; k < T; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) traj.states(k, i) = rows[k][static_cast<std::size_t>(state_cols[i])];
        for (Eigen::Index j = 0; j < m; ++j) traj.inputs(k, j) = rows[k][static_cast<std::size_t>(input_cols[j])];
    }
    if (have_derivs) {
        Eigen::MatrixXd d(T, n);
        for (Eigen::Index k = 0; k < T; ++k)
            for (Eigen::Index i = 0; i < n; ++i) d(k, i) = rows[k][static_cast<std::size_t>(deriv_cols[i])];
        traj.derivatives = std::move(d);
    }
    traj.channel_names = schema.state_columns;
    traj.channel_names.insert(traj.channel_names.end(), schema.input_columns.begin(), schema.input_columns.end());
    traj.validate();
    return traj;
}

void save_csv(const Trajectory& traj, const std::string& path) {
    traj.validate();
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);

    out << "t";
    for (Eigen::Index i = 0; i < traj.n_states(); ++i) out << ',' << traj.state_name(i);
    for (Eigen::Index j = 0; j < traj.n_inputs(); ++j) out << ',' << traj.input_name(j);
    if (traj.has_derivatives())
        for (Eigen::Index i = 0; i < traj.n_states(); ++i) out << ',' << traj.state_name(i) << "_dot";
    out << '\n';

    for (Eigen::Index k = 0; k < traj.rows(); ++k) {
        out << format_double(traj.time(k));
        for (Eigen::Index i = 0; i < traj.n_states(); ++i) out << ',' << format_double(traj.states(k, i));
        for (Eigen::Index j = 0; j < traj.n_inputs(); ++j) out << ',' << format_double(traj.inputs(k, j));
        if (traj.has_derivatives())
            for (Eigen::Index i = 0; i < traj.n_states(); ++i) out << ',' << format_double((*traj.derivatives)(k, i));
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

namespace {

Trajectory segment(const Trajectory& traj, Eigen::Index start, Eigen::Index len) {
    Trajectory seg;
    seg.t0 = traj.t0 + static_cast<double>(start) * traj.dt;
    seg.dt = traj.dt;
    seg.states = traj.states.middleRows(start, len);
    seg.inputs = traj.inputs.middleRows(start, len);
    if (traj.derivatives) seg.derivatives = traj.derivatives->middleRows(start, len);
    seg.channel_names = traj.channel_names;
    return seg;
}

} // namespace

std::tuple<Trajectory, Trajectory, Trajectory> split(const Trajectory& traj, const SplitSpec& spec) {
    traj.validate();
    spec.validate(traj.rows());
    Trajectory train = segment(traj, 0, spec.train_len);
    Trajectory valid = segment(traj, spec.train_len, spec.valid_len);
    Trajectory test = segment(traj, spec.train_len + spec.valid_len, spec.test_len);
    return {std::move(train), std::move(valid), std::move(test)};
}

} // namespace sindyforge
