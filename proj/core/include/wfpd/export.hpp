#pragma once

#include <span>
#include <string>
#include <vector>

#include "wfpd/analysis.hpp"
#include "wfpd/chain.hpp"
#include "wfpd/generators.hpp"
#include "wfpd/oracle.hpp"
#include "wfpd/simplex.hpp"

namespace wfpd {

/// Round-trip exact decimal rendering of a double ("%.17g").
std::string format_double(double x);

/// Writers produce deterministic bytes: fixed column schemas, "%.17g"
/// numbers, '\n' line ends.  A nonempty `meta` string (typically the
/// resolved run configuration as JSON) is embedded as a leading
/// "# <meta>" comment line in CSV files and as a first header object
/// {"meta": ...} line in JSONL files.

void write_chain_csv(const std::string& path, const ChainPath& chain,
                     const std::string& meta = {});
void write_chain_jsonl(const std::string& path, const ChainPath& chain,
                       const std::string& meta = {});

void write_diffusion_csv(const std::string& path,
                         std::span<const SimplexState> states, double dt,
                         const std::string& meta = {});
void write_ranked_csv(const std::string& path,
                      std::span<const RankedState> states, double dt,
                      const std::string& meta = {});

void write_pd_csv(const std::string& path, std::span<const PdSample> samples,
                  const std::string& meta = {});

void write_gap_csv(const std::string& path, const GapReport& report,
                   const Params& params, const std::string& meta = {});

void write_moment_csv(const std::string& path,
                      std::span<const MomentReport> reports,
                      const std::string& meta = {});

void write_compare_csv(const std::string& path,
                       std::span<const CompareReport> reports,
                       const std::string& meta = {});

}  // namespace wfpd
