#include "conc/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace conc {

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path);
}

// 17 significant digits round-trips every double exactly
std::string num17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

FiniteMetricProbabilitySpace load_space_json(const std::string& path) {
    json j = read_json_file(path);
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    std::vector<double> weights = j.at("weights").get<std::vector<double>>();
    std::vector<double> distance;
    for (const auto& row : j.at("distance"))
        for (const auto& x : row) distance.push_back(x.get<double>());
    return build_finite(std::move(labels), std::move(distance), std::move(weights));
}

void save_space_json(const FiniteMetricProbabilitySpace& space, const std::string& path) {
    std::size_t k = space.size();
    std::ostringstream out;
    out << "{\n  \"labels\": [";
    for (std::size_t i = 0; i < k; ++i) out << (i ? ", " : "") << '"' << escape(space.labels[i]) << '"';
    out << "],\n  \"distance\": [\n";
    for (std::size_t i = 0; i < k; ++i) {
        out << "    [";
        for (std::size_t j = 0; j < k; ++j) out << (j ? ", " : "") << num17(space.d(i, j));
        out << (i + 1 < k ? "],\n" : "]\n");
    }
    out << "  ],\n  \"weights\": [";
    for (std::size_t i = 0; i < k; ++i) out << (i ? ", " : "") << num17(space.weights[i]);
    out << "]\n}\n";
    write_text_file(path, out.str());
}

SubsetMask load_mask_json(const std::string& path, std::size_t space_size) {
    json j = read_json_file(path);
    SubsetMask m;
    m.member.assign(space_size, 0);
    for (const auto& idx : j.at("members")) {
        std::size_t i = idx.get<std::size_t>();
        if (i >= space_size) throw std::runtime_error("mask index out of range in " + path);
        m.member[i] = 1;
    }
    return m;
}

void save_mask_json(const SubsetMask& mask, const std::string& path) {
    std::ostringstream out;
    out << "{\"members\": [";
    bool first = true;
    for (std::size_t i : mask.indices()) {
        out << (first ? "" : ", ") << i;
        first = false;
    }
    out << "]}\n";
    write_text_file(path, out.str());
}

ScalarField load_field_json(const std::string& path) {
    json j = read_json_file(path);
    return j.at("values").get<std::vector<double>>();
}

std::string report_to_json(const ScenarioReport& report) {
    std::ostringstream out;
    out << "{\n  \"scenario\": \"" << escape(report.scenario) << "\",\n  \"params\": {";
    for (std::size_t i = 0; i < report.params.size(); ++i)
        out << (i ? ", " : "") << '"' << escape(report.params[i].first)
            << "\": " << num17(report.params[i].second);
    out << "},\n  \"seed\": " << report.seed << ",\n  \"quantities\": [\n";
    for (std::size_t i = 0; i < report.quantities.size(); ++i) {
        const Quantity& q = report.quantities[i];
        out << "    {\"name\": \"" << escape(q.name) << "\", \"value\": " << num17(q.value)
            << ", \"provenance\": \"" << escape(q.provenance) << '"';
        if (q.exact) out << ", \"exact\": \"" << q.exact->str() << '"';
        out << (i + 1 < report.quantities.size() ? "},\n" : "}\n");
    }
    out << "  ],\n  \"checks\": [\n";
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
        const CheckReport& c = report.checks[i];
        out << "    {\"name\": \"" << escape(c.name) << "\", \"lhs\": " << num17(c.lhs)
            << ", \"rhs\": " << num17(c.rhs) << ", \"constant\": " << num17(c.constant_used)
            << ", \"tolerance\": " << num17(c.tolerance)
            << ", \"passed\": " << (c.passed ? "true" : "false")
            << ", \"vacuous\": " << (c.vacuous ? "true" : "false") << ", \"witness\": \""
            << escape(c.witness) << '"' << (i + 1 < report.checks.size() ? "},\n" : "}\n");
    }
    out << "  ],\n  \"runtime_ms\": " << report.runtime_ms << "\n}\n";
    return out.str();
}

std::string report_to_csv(const ScenarioReport& report) {
    std::ostringstream out;
    out << "name,lhs,rhs,constant,tolerance,passed\n";
    for (const CheckReport& c : report.checks)
        out << c.name << ',' << num17(c.lhs) << ',' << num17(c.rhs) << ','
            << num17(c.constant_used) << ',' << num17(c.tolerance) << ','
            << (c.passed ? "true" : "false") << '\n';
    return out.str();
}

void emit_report(const ScenarioReport& report, ReportFormat format, const std::string& path) {
    write_text_file(path,
                    format == ReportFormat::Json ? report_to_json(report) : report_to_csv(report));
}

ScenarioReport load_report_json(const std::string& path) {
    json j = read_json_file(path);
    ScenarioReport r;
    r.scenario = j.at("scenario").get<std::string>();
    for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it)
        r.params.emplace_back(it.key(), it.value().get<double>());
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& q : j.at("quantities")) {
        Quantity out;
        out.name = q.at("name").get<std::string>();
        out.value = q.at("value").get<double>();
        out.provenance = q.at("provenance").get<std::string>();
        r.quantities.push_back(std::move(out));
    }
    for (const auto& c : j.at("checks")) {
        CheckReport out;
        out.name = c.at("name").get<std::string>();
        out.lhs = c.at("lhs").get<double>();
        out.rhs = c.at("rhs").get<double>();
        out.constant_used = c.at("constant").get<double>();
        out.tolerance = c.at("tolerance").get<double>();
        out.passed = c.at("passed").get<bool>();
        out.vacuous = c.at("vacuous").get<bool>();
        out.witness = c.at("witness").get<std::string>();
        r.checks.push_back(std::move(out));
    }
    r.runtime_ms = j.at("runtime_ms").get<std::int64_t>();
    return r;
}

std::string bound_estimate_to_json(const BoundEstimate& estimate) {
    std::ostringstream out;
    out << "{\n  \"lower\": " << num17(estimate.lower) << ",\n  \"upper\": " << num17(estimate.upper)
        << ",\n  \"method\": \"" << escape(estimate.method) << "\",\n  \"witness_kind\": \""
        << escape(estimate.witness_kind) << "\",\n  \"witness\": [";
    for (std::size_t i = 0; i < estimate.witness.size(); ++i)
        out << (i ? ", " : "") << num17(estimate.witness[i]);
    out << "],\n  \"diagnostics\": {";
    bool first = true;
    for (const auto& [k, v] : estimate.diagnostics) {
        out << (first ? "" : ", ") << '"' << escape(k) << "\": " << num17(v);
        first = false;
    }
    out << "}\n}\n";
    return out.str();
}

}  // namespace conc
