#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sls/column.hpp"
#include "sls/errors.hpp"
#include "sls/eval.hpp"
#include "sls/netmodel.hpp"
#include "sls/realization.hpp"

namespace sls {

using Json = nlohmann::json;

// All CSV floats carry 17 significant digits so written artifacts
// round-trip to the exact double.
inline std::string fmt17(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

inline Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

inline Matrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw Error(ErrorCode::ConfigParse, "matrix object needs rows/cols/data");
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    const auto& data = j.at("data");
    if (!data.is_array() || static_cast<Index>(data.size()) != rows)
        throw Error(ErrorCode::ConfigParse, "matrix data row count mismatch");
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto& row = data.at(static_cast<std::size_t>(i));
        if (static_cast<Index>(row.size()) != cols)
            throw Error(ErrorCode::ConfigParse, "matrix data column count mismatch");
        for (Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
}

inline Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline Json pattern_to_json(const Pattern& p) {
    Json rows = Json::array();
    for (Index i = 0; i < p.entries.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < p.entries.cols(); ++j) row.push_back(p.entries(i, j));
        rows.push_back(std::move(row));
    }
    return Json{{"rows", p.entries.rows()}, {"cols", p.entries.cols()}, {"data", std::move(rows)}};
}

inline Pattern pattern_from_json(const Json& j, PatternRole role) {
    const Matrix m = matrix_from_json(j);
    Pattern p{Eigen::MatrixXi(m.rows(), m.cols()), role};
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            if (v != 0.0 && v != 1.0)
                throw Error(ErrorCode::ConfigParse, "pattern entries must be 0 or 1");
            p.entries(r, c) = v != 0.0 ? 1 : 0;
        }
    return p;
}

inline Json plant_to_json(const Plant& plant) {
    Json part{{"n", plant.partition.state_dims()}, {"m", plant.partition.input_dims()}};
    return Json{{"A", matrix_to_json(plant.A)},
                {"B", matrix_to_json(plant.B)},
                {"partition", std::move(part)}};
}

inline Plant plant_from_json(const Json& j) {
    if (!j.contains("A") || !j.contains("B") || !j.contains("partition"))
        throw Error(ErrorCode::ConfigParse, "plant object needs A/B/partition");
    const auto& part = j.at("partition");
    return Plant(matrix_from_json(j.at("A")), matrix_from_json(j.at("B")),
                 SubsystemPartition(part.at("n").get<std::vector<Index>>(),
                                    part.at("m").get<std::vector<Index>>()));
}

inline Json weights_to_json(const CostWeights& w) {
    return Json{{"Q", matrix_to_json(w.Q)}, {"R", matrix_to_json(w.R)}};
}

inline CostWeights weights_from_json(const Json& j) {
    if (!j.contains("Q") || !j.contains("R"))
        throw Error(ErrorCode::ConfigParse, "weights object needs Q/R");
    return {matrix_from_json(j.at("Q")), matrix_from_json(j.at("R"))};
}

inline Json clm_to_json(const LocalizedClm& clm) {
    Json columns = Json::array();
    for (const auto& cs : clm.columns) {
        columns.push_back(Json{{"j", cs.j},
                               {"support", cs.support},
                               {"boundary", cs.boundary},
                               {"input_support", cs.input_support},
                               {"j_in_support", cs.j_in_support},
                               {"Acl", matrix_to_json(cs.Acl)},
                               {"Fu", matrix_to_json(cs.Fu)},
                               {"init", vector_to_json(cs.init())},
                               {"gain", matrix_to_json(cs.gain)},
                               {"riccati", matrix_to_json(cs.riccati)}});
    }
    return Json{{"n_x", clm.n_x()}, {"n_u", clm.n_u()}, {"columns", std::move(columns)}};
}

inline Json controller_to_json(const DistributedController& dc) {
    Json subs = Json::array();
    for (const auto& sub : dc.subs()) {
        Json reads = Json::array();
        for (const auto& r : sub.neighbor_reads)
            reads.push_back(Json{{"source", r.source}, {"pos", r.pos}});
        subs.push_back(Json{{"ell", sub.ell},
                            {"A_K", matrix_to_json(sub.A_K)},
                            {"B_K", vector_to_json(sub.B_K)},
                            {"C_K", matrix_to_json(sub.C_K)},
                            {"D_K", vector_to_json(sub.D_K)},
                            {"neighbor_reads", std::move(reads)},
                            {"embed", sub.embed}});
    }
    return Json{{"subsystems", dc.partition().count()},
                {"comm", pattern_to_json(dc.comm_pattern())},
                {"subs", std::move(subs)}};
}

inline Json cost_report_to_json(const CostReport& report) {
    return Json{{"method", report.method == CostMethod::Lyapunov ? "lyapunov" : "truncated"},
                {"total", report.total},
                {"per_column", report.per_column}};
}

inline Json pattern_report_to_json(const PatternReport& report) {
    auto list = [](const std::vector<PatternViolation>& vs) {
        Json arr = Json::array();
        for (const auto& v : vs) arr.push_back(Json{{"kind", v.kind}, {"i", v.i}, {"j", v.j}});
        return arr;
    };
    return Json{{"ok", report.ok}, {"errors", list(report.errors)}, {"warnings", list(report.warnings)}};
}

inline std::string trajectory_to_csv(const Trajectory& traj) {
    std::ostringstream out;
    const Index n_x = traj.x.empty() ? 0 : traj.x.front().size();
    const Index n_u = traj.u.empty() ? 0 : traj.u.front().size();
    const bool with_estimates = !traj.w_hat.empty();
    out << "t";
    for (Index i = 1; i <= n_x; ++i) out << ",x_" << i;
    for (Index i = 1; i <= n_u; ++i) out << ",u_" << i;
    if (with_estimates)
        for (Index i = 1; i <= n_x; ++i) out << ",what_" << i;
    out << "\n";
    for (std::size_t t = 0; t < traj.x.size(); ++t) {
        out << t;
        for (Index i = 0; i < n_x; ++i) out << "," << fmt17(traj.x[t](i));
        for (Index i = 0; i < n_u; ++i) out << "," << fmt17(traj.u[t](i));
        if (with_estimates)
            for (Index i = 0; i < n_x; ++i) out << "," << fmt17(traj.w_hat[t](i));
        out << "\n";
    }
    return out.str();
}

inline const char* kSweepCsvHeader =
    "kind,parameter,n_x,n_u,ih_cost,fir_cost,fir_feasible,"
    "ih_percol_median_ms,ih_parallel_ms,ih_total_ms,"
    "fir_percol_median_ms,fir_parallel_ms,fir_total_ms,"
    "ih_reduced_dim_median,fir_vars_median,note";

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows, bool include_timing = true) {
    std::ostringstream out;
    out << kSweepCsvHeader << "\n";
    for (const auto& row : rows) {
        out << row.kind << "," << fmt17(row.parameter) << "," << row.n_x << "," << row.n_u << ","
            << fmt17(row.ih_cost) << "," << fmt17(row.fir_cost_value) << "," << row.fir_feasible
            << ",";
        if (include_timing)
            out << fmt17(row.ih_percol_median_ms) << "," << fmt17(row.ih_parallel_ms) << ","
                << fmt17(row.ih_total_ms) << "," << fmt17(row.fir_percol_median_ms) << ","
                << fmt17(row.fir_parallel_ms) << "," << fmt17(row.fir_total_ms) << ",";
        else
            out << ",,,,,,";
        out << row.ih_reduced_dim_median << "," << row.fir_vars_median << "," << row.note << "\n";
    }
    return out.str();
}

// Deterministic view of a sweep CSV: every timing column blanked out, all
// other fields byte-for-byte. Used for reproducibility comparisons.
inline std::string strip_timing_columns(const std::string& sweep_csv) {
    std::istringstream in(sweep_csv);
    std::ostringstream out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            out << line << "\n";
            header = false;
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        for (std::size_t i = 7; i < 13 && i < fields.size(); ++i) fields[i].clear();
        for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
        out << "\n";
    }
    return out.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Json parse_json_file(const std::filesystem::path& path) {
    try {
        return Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::ConfigParse, "invalid JSON in " + path.string() + ": " + e.what());
    }
}

}  // namespace sls
