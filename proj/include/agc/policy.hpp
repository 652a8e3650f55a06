#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace agc {

/// Piecewise-constant SoC feedback gain f_SoC(e) over [0, E].
/// Bins are half-open [e_lo, e_hi) except the last, which is closed.
struct SocPolicyTable {
    double energy_mwh = 0.0;
    std::vector<double> edges;  // n_bins + 1 values, edges[0] = 0, edges[n] = E
    std::vector<double> gains;  // MW/MWh
    std::vector<std::size_t> counts;

    std::size_t n_bins() const { return gains.size(); }

    /// Table with `n_bins` equal-width bins and every gain set to `gain`.
    static SocPolicyTable uniform(double energy_mwh, std::size_t n_bins, double gain = 0.0);

    void validate() const;
    std::size_t bin_of(double soc_mwh) const;
    bool operator==(const SocPolicyTable&) const = default;
};

/// Equal-width bin edges; edge i is E * i / n.
std::vector<double> make_edges(double energy_mwh, std::size_t n_bins);

/// Index of the bin containing `soc_mwh` (no range check).
std::size_t bin_index(const std::vector<double>& edges, double soc_mwh);

/// Gain of the bin containing `soc_mwh`; throws std::out_of_range outside [0, E].
double eval_policy(const SocPolicyTable& table, double soc_mwh);

void write_policy_csv(std::ostream& out, const SocPolicyTable& table);
void save_policy_csv(const std::filesystem::path& path, const SocPolicyTable& table);
SocPolicyTable parse_policy_csv(std::istream& in);
SocPolicyTable load_policy_csv(const std::filesystem::path& path);

}  // namespace agc
