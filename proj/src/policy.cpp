#include "agc/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "agc/csv.hpp"
#include "agc/errors.hpp"

namespace agc {

std::vector<double> make_edges(double energy_mwh, std::size_t n_bins) {
    std::vector<double> edges(n_bins + 1);
    for (std::size_t i = 0; i <= n_bins; ++i) {
        edges[i] = energy_mwh * static_cast<double>(i) / static_cast<double>(n_bins);
    }
    edges.back() = energy_mwh;
    return edges;
}

std::size_t bin_index(const std::vector<double>& edges, double soc_mwh) {
    const std::size_t n = edges.size() - 1;
    const auto it = std::upper_bound(edges.begin(), edges.end(), soc_mwh);
    if (it == edges.begin()) return 0;
    return std::min(static_cast<std::size_t>(it - edges.begin()) - 1, n - 1);
}

SocPolicyTable SocPolicyTable::uniform(double energy_mwh, std::size_t n_bins, double gain) {
    if (n_bins == 0 || !(energy_mwh > 0.0)) throw ConfigError("policy table needs E > 0 and at least one bin");
    SocPolicyTable t;
    t.energy_mwh = energy_mwh;
    t.edges = make_edges(energy_mwh, n_bins);
    t.gains.assign(n_bins, gain);
    t.counts.assign(n_bins, 0);
    return t;
}

void SocPolicyTable::validate() const {
    if (gains.empty() || edges.size() != gains.size() + 1 || counts.size() != gains.size()) {
        throw DataError("policy table has inconsistent sizes");
    }
    if (edges.front() != 0.0 || edges.back() != energy_mwh) throw DataError("policy table must span [0, E]");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i + 1] > edges[i])) throw DataError("policy bin edges must be strictly increasing");
    }
    for (double g : gains) {
        if (!std::isfinite(g)) throw DataError("policy gain is not finite");
    }
}

std::size_t SocPolicyTable::bin_of(double soc_mwh) const { return bin_index(edges, soc_mwh); }

double eval_policy(const SocPolicyTable& table, double soc_mwh) {
    if (!(soc_mwh >= 0.0 && soc_mwh <= table.energy_mwh)) {
        throw std::out_of_range("SoC " + std::to_string(soc_mwh) + " MWh outside [0, E]");
    }
    return table.gains[table.bin_of(soc_mwh)];
}

namespace {
constexpr const char* kPolicyHeader = "bin_index,e_lo_mwh,e_hi_mwh,gain_mw_per_mwh,sample_count";
}

void write_policy_csv(std::ostream& out, const SocPolicyTable& table) {
    out << kPolicyHeader << '\n';
    for (std::size_t i = 0; i < table.n_bins(); ++i) {
        out << i << ',' << csv::format_double(table.edges[i]) << ',' << csv::format_double(table.edges[i + 1]) << ','
            << csv::format_double(table.gains[i]) << ',' << table.counts[i] << '\n';
    }
}

void save_policy_csv(const std::filesystem::path& path, const SocPolicyTable& table) {
    std::ostringstream buf;
    write_policy_csv(buf, table);
    csv::write_file(path, buf.str());
}

SocPolicyTable parse_policy_csv(std::istream& in) {
    const auto rows = csv::read_rows(in, kPolicyHeader);
    if (rows.empty()) throw DataError("policy file has no bins");
    SocPolicyTable t;
    t.edges.push_back(0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.cells.size() != 5) throw DataError("policy row " + std::to_string(r.row) + ": expected 5 columns");
        if (csv::parse_size(r, 0) != i) throw DataError("policy row " + std::to_string(r.row) + ": bin_index out of order");
        const double lo = csv::parse_double(r, 1);
        if (lo != t.edges.back()) throw DataError("policy row " + std::to_string(r.row) + ": bins are not contiguous");
        t.edges.push_back(csv::parse_double(r, 2));
        t.gains.push_back(csv::parse_double(r, 3));
        t.counts.push_back(csv::parse_size(r, 4));
    }
    t.energy_mwh = t.edges.back();
    t.validate();
    return t;
}

SocPolicyTable load_policy_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open policy file " + path.string());
    return parse_policy_csv(in);
}

}  // namespace agc
