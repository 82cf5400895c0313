#include "wfpd/export.hpp"

#include <cstdio>
#include <fstream>

namespace wfpd {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    return out;
}

void put_meta_csv(std::ofstream& out, const std::string& meta) {
    if (!meta.empty()) out << "# " << meta << "\n";
}

}  // namespace

void write_chain_csv(const std::string& path, const ChainPath& chain,
                     const std::string& meta) {
    std::ofstream out = open_out(path);
    put_meta_csv(out, meta);
    out << "step";
    for (int i = 1; i <= chain.config.kernel.K; ++i) out << ",z_" << i;
    out << "\n";
    const double n = static_cast<double>(chain.config.kernel.N);
    std::int64_t step = chain.config.burn_in;
    for (const DiscreteSimplexState& s : chain.states) {
        out << step;
        for (std::int64_t c : s.counts()) {
            out << ',' << format_double(static_cast<double>(c) / n);
        }
        out << "\n";
        step += chain.config.thin;
    }
}

void write_chain_jsonl(const std::string& path, const ChainPath& chain,
                       const std::string& meta) {
    std::ofstream out = open_out(path);
    if (!meta.empty()) out << "{\"meta\":" << meta << "}\n";
    std::int64_t step = chain.config.burn_in;
    for (const DiscreteSimplexState& s : chain.states) {
        out << "{\"step\":" << step << ",\"counts\":[";
        for (std::size_t i = 0; i < s.counts().size(); ++i) {
            if (i) out << ',';
            out << s.counts()[i];
        }
        out << "]}\n";
        step += chain.config.thin;
    }
}

void write_diffusion_csv(const std::string& path,
                         std::span<const SimplexState> states, double dt,
                         const std::string& meta) {
    std::ofstream out = open_out(path);
    put_meta_csv(out, meta);
    if (states.empty()) return;
    out << "t";
    for (int i = 1; i <= states.front().K(); ++i) out << ",z_" << i;
    out << "\n";
    for (std::size_t s = 0; s < states.size(); ++s) {
        out << format_double(static_cast<double>(s) * dt);
        for (double z : states[s].freqs()) out << ',' << format_double(z);
        out << "\n";
    }
}

void write_ranked_csv(const std::string& path,
                      std::span<const RankedState> states, double dt,
                      const std::string& meta) {
    std::ofstream out = open_out(path);
    put_meta_csv(out, meta);
    if (states.empty()) return;
    out << "t";
    for (int i = 1; i <= states.front().K(); ++i) out << ",zr_" << i;
    out << "\n";
    for (std::size_t s = 0; s < states.size(); ++s) {
        out << format_double(static_cast<double>(s) * dt);
        for (double z : states[s].freqs()) out << ',' << format_double(z);
        out << "\n";
    }
}

void write_pd_csv(const std::string& path, std::span<const PdSample> samples,
                  const std::string& meta) {
    std::ofstream out = open_out(path);
    put_meta_csv(out, meta);
    if (samples.empty()) return;
    out << "draw";
    for (int j = 1; j <= samples.front().J; ++j) out << ",z_" << j;
    out << ",tail_mass\n";
    for (std::size_t d = 0; d < samples.size(); ++d) {
        out << d;
        for (double w : samples[d].ranked_freqs) out << ',' << format_double(w);
        out << ',' << format_double(samples[d].tail_mass) << "\n";
    }
}

void write_gap_csv(const std::string& path, const GapReport& report,
                   const Params& params, const std::string& meta) {
    std::ofstream out = open_out(path);
    put_meta_csv(out, meta);
    out << "K,m,gap,bound\n";
    for (std::size_t i = 0; i < report.K_values.size(); ++i) {
        out << report.K_values[i] << ',' << format_double(report.m) << ','
            << format_double(report.sup_gaps[i]) << ','
            << format_double(rate_lemma_bound(report.m, report.K_values[i], params))
            << "\n";
    }
}

void write_moment_csv(const std::string& path,
                      std::span<const MomentReport> reports,
                      const std::string& meta) {
    std::ofstream out = open_out(path);
    put_meta_csv(out, meta);
    out << "m,estimate,stderr,analytic,z_score\n";
    for (const MomentReport& r : reports) {
        out << r.m << ',' << format_double(r.estimate) << ','
            << format_double(r.std_error) << ',' << format_double(r.analytic)
            << ',' << format_double(r.z_score) << "\n";
    }
}

void write_compare_csv(const std::string& path,
                       std::span<const CompareReport> reports,
                       const std::string& meta) {
    std::ofstream out = open_out(path);
    put_meta_csv(out, meta);
    out << "statistic,value,n1,n2,pass_threshold\n";
    for (const CompareReport& r : reports) {
        out << (r.statistic == CompareStatistic::KS ? "KS" : "meanAbsDiff")
            << ',' << format_double(r.value) << ',' << r.n1 << ',' << r.n2
            << ',' << format_double(r.pass_threshold) << "\n";
    }
}

}  // namespace wfpd
