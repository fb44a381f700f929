// Copyright 2026 The ionet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ionet/cli.hpp"

#include "ionet/csv.hpp"
#include "ionet/errors.hpp"
#include "ionet/graph.hpp"
#include "ionet/io.hpp"
#include "ionet/oracle.hpp"
#include "ionet/paths.hpp"
#include "ionet/random_walk.hpp"
#include "ionet/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <algorithm>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ionet::cli {

namespace {

const std::vector<double> kDefaultAlphaGrid{0.5, 1.0, 1.5};

struct Options {
  std::string flows;
  std::string rpc;
  std::string output_vector;
  std::string employment;
  std::string agg_map;
  std::optional<double> alpha;
  double tol = 1e-9;
  bool allow_unreachable = false;
  bool transpose = false;
  bool normalize = false;
  bool drop_isolated = false;
  bool cbet_exclude_endpoints = false;
  std::string dump_mfpt;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::size_t walks = 100000;
  std::size_t max_steps = 10000000;
  std::optional<long> source;
  std::optional<long> target;
  std::optional<long> node;
  std::optional<std::size_t> top;
  std::string spearman;
  std::vector<std::string> measures;
  unsigned workers = 0;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorClass::Usage, what) {}
};

/// The network the measures run on, plus the coefficient view multipliers need.
struct Network {
  FlowMatrix<double> flows;
  std::optional<FlowMatrix<double>> absorption;  // absent when it cannot be derived
  std::optional<VectorX<double>> employment;
};

OutputFormat output_format(const Options& o) {
  return o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
}

WalkOptions walk_options(const Options& o) {
  WalkOptions w;
  w.tol = o.tol;
  w.allow_unreachable = o.allow_unreachable;
  w.exclude_endpoints = o.cbet_exclude_endpoints;
  w.workers = o.workers;
  return w;
}

VectorX<double> select(const VectorX<double>& v, const std::vector<Index>& kept) {
  VectorX<double> out(static_cast<Index>(kept.size()));
  for (std::size_t r = 0; r < kept.size(); ++r) out[static_cast<Index>(r)] = v[kept[r]];
  return out;
}

VectorX<double> sum_by_group(const VectorX<double>& v, const AggregationMap& map) {
  VectorX<double> out = VectorX<double>::Zero(map.coarse_size());
  for (Index i = 0; i < v.size(); ++i) out[map.coarse_of[static_cast<std::size_t>(i)]] += v[i];
  return out;
}

/// Ingestion order: transpose, RPC, output scaling, aggregation, isolated-sector removal.
Network load_network(const Options& o, bool need_absorption) {
  FlowMatrix<double> flows = csv::read_flows(std::filesystem::path(o.flows));
  if (o.transpose) flows = transposed(flows);
  const Index n = flows.size();

  if (!o.rpc.empty()) {
    auto rpc = csv::read_rpc(std::filesystem::path(o.rpc), n);
    flows = std::visit([&](const auto& r) { return apply_rpc(flows, r); }, rpc);
  }

  std::optional<VectorX<double>> output;
  if (!o.output_vector.empty()) {
    output = csv::read_sector_vector(std::filesystem::path(o.output_vector), n);
    flows = regional_inputs(flows, *output);
  }
  std::optional<VectorX<double>> employment;
  if (!o.employment.empty())
    employment = csv::read_sector_vector(std::filesystem::path(o.employment), n);

  if (!o.agg_map.empty()) {
    const auto map = csv::read_aggregation(std::filesystem::path(o.agg_map), n);
    flows = aggregate(flows, map);
    if (employment) {
      if (!output)
        throw UsageError("aggregating employment coefficients needs --output-vector");
      // Output-weighted average of the fine coefficients.
      const VectorX<double> jobs = sum_by_group(employment->cwiseProduct(*output), map);
      const VectorX<double> coarse_output = sum_by_group(*output, map);
      VectorX<double> coeff = VectorX<double>::Zero(jobs.size());
      for (Index c = 0; c < coeff.size(); ++c)
        if (coarse_output[c] > 0.0) coeff[c] = jobs[c] / coarse_output[c];
      employment = coeff;
    }
    if (output) output = sum_by_group(*output, map);
    else if (need_absorption)
      throw UsageError("multipliers on an aggregated network need --output-vector");
  }

  if (o.drop_isolated) {
    auto [kept_flows, kept] = drop_isolated(flows);
    flows = std::move(kept_flows);
    if (output) output = select(*output, kept);
    if (employment) employment = select(*employment, kept);
  }

  Network net{flows, std::nullopt, employment};
  if (output)
    net.absorption = absorption_from_inputs(flows, *output);
  else
    net.absorption = flows;
  return net;
}

template <typename Body>
void with_output(const Options& o, std::ostream& fallback, Body&& body) {
  if (o.out.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw DomainError("cannot write '" + o.out + "'");
  body(file);
}

void warn_diagnostics(const SolveDiagnostics& d, std::ostream& err) {
  for (Index t : d.ill_conditioned)
    err << "warning: first-passage system for target " << (t + 1)
        << " is ill-conditioned (condition estimate above 1e12)\n";
  if (d.dropped_pairs > 0)
    err << "warning: " << d.dropped_pairs
        << " source-target pairs are not absorbed with probability one; affected scores are "
        << kUndefinedMarker << " or exclude those pairs\n";
}

void dump_mfpt(const Options& o, const MfptMatrix<double>& h) {
  if (o.dump_mfpt.empty()) return;
  std::ofstream file(o.dump_mfpt);
  if (!file) throw DomainError("cannot write '" + o.dump_mfpt + "'");
  csv::write_matrix(file, h.steps);
}

double alpha_or(const Options& o, double fallback) { return o.alpha.value_or(fallback); }

// --- subcommands -----------------------------------------------------------

void cmd_rwc(const Options& o, std::ostream& out, std::ostream& err) {
  const auto net = load_network(o, false);
  const auto m = build_transition(net.flows);
  const auto h = mfpt_matrix(m, walk_options(o));
  warn_diagnostics(h.diagnostics, err);
  dump_mfpt(o, h);
  auto c = random_walk_centrality(h, o.allow_unreachable);
  c.meta.tol = o.tol;
  with_output(o, out, [&](std::ostream& s) { write_scores(s, net.flows.sectors(), c, output_format(o)); });
}

void cmd_cbet(const Options& o, std::ostream& out, std::ostream& err) {
  const auto net = load_network(o, false);
  const auto m = build_transition(net.flows);
  const auto c = counting_betweenness(m, walk_options(o));
  if (c.meta.dropped_pairs > 0) {
    SolveDiagnostics d;
    d.dropped_pairs = c.meta.dropped_pairs;
    warn_diagnostics(d, err);
  }
  with_output(o, out, [&](std::ostream& s) { write_scores(s, net.flows.sectors(), c, output_format(o)); });
}

void cmd_closeness(const Options& o, std::ostream& out, std::ostream&) {
  const auto net = load_network(o, false);
  const auto d = weighted_distance(net.flows, alpha_or(o, 1.0), o.workers);
  const auto c = closeness(d, o.allow_unreachable);
  with_output(o, out, [&](std::ostream& s) { write_scores(s, net.flows.sectors(), c, output_format(o)); });
}

void cmd_betweenness(const Options& o, std::ostream& out, std::ostream&) {
  const auto net = load_network(o, false);
  const auto c = betweenness(net.flows, alpha_or(o, 1.0), o.normalize, o.workers);
  with_output(o, out, [&](std::ostream& s) { write_scores(s, net.flows.sectors(), c, output_format(o)); });
}

std::vector<CentralityVector<double>> multipliers(const Network& net, const Options& o) {
  std::vector<CentralityVector<double>> cols;
  cols.push_back(output_multiplier(*net.absorption, o.tol));
  if (net.employment) cols.push_back(employment_multiplier(*net.absorption, *net.employment, o.tol));
  return cols;
}

void cmd_multipliers(const Options& o, std::ostream& out, std::ostream&) {
  const auto net = load_network(o, true);
  const auto cols = multipliers(net, o);
  const auto table = make_rank_table(net.flows.sectors(), cols);
  const auto fmt = output_format(o);
  with_output(o, out, [&](std::ostream& s) {
    if (fmt == OutputFormat::Csv) {
      s << "sector_id,description";
      for (const auto& c : cols) s << ',' << measure_tag(c.measure) << ',' << measure_tag(c.measure) << "_rank";
      s << '\n';
      for (const auto& row : table.rows) {
        s << (row.id + 1) << ',' << csv::quote(row.label);
        for (std::size_t c = 0; c < cols.size(); ++c) {
          if (row.undefined[c])
            s << ',' << kUndefinedMarker << ',' << row.ranks[c] << ' ' << kUndefinedMarker;
          else
            s << ',' << csv::format_number(row.scores[c]) << ',' << row.ranks[c];
        }
        s << '\n';
      }
    } else {
      for (const auto& c : cols) write_scores(s, net.flows.sectors(), c, fmt);
    }
  });
}

void cmd_rank_all(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<Measure> selected;
  for (const auto& tag : o.measures) selected.push_back(parse_measure(tag));
  auto wanted = [&](Measure m) {
    return selected.empty() || std::find(selected.begin(), selected.end(), m) != selected.end();
  };

  const auto net = load_network(o, wanted(Measure::OutputMultiplier) || wanted(Measure::EmploymentMultiplier));
  std::vector<CentralityVector<double>> cols;
  if (wanted(Measure::OutputMultiplier)) cols.push_back(output_multiplier(*net.absorption, o.tol));
  if (wanted(Measure::EmploymentMultiplier)) {
    if (net.employment)
      cols.push_back(employment_multiplier(*net.absorption, *net.employment, o.tol));
    else if (!selected.empty())
      throw UsageError("EMPMULT needs --employment");
  }

  if (wanted(Measure::RandomWalkCentrality) || wanted(Measure::CountingBetweenness)) {
    const auto m = build_transition(net.flows);
    auto rw = random_walk_measures(m, walk_options(o));
    warn_diagnostics(rw.mfpt.diagnostics, err);
    dump_mfpt(o, rw.mfpt);
    if (wanted(Measure::RandomWalkCentrality)) cols.push_back(rw.closeness);
    if (wanted(Measure::CountingBetweenness)) cols.push_back(rw.betweenness);
  }

  auto add_paths = [&](double a, Measure clo, Measure bet) {
    if (!wanted(clo) && !wanted(bet)) return;
    const auto g = geodesic_counts(net.flows, a, o.workers);
    if (wanted(clo)) cols.push_back(closeness(g.distance, o.allow_unreachable));
    if (wanted(bet)) cols.push_back(betweenness(g, o.normalize));
  };
  add_paths(0.0, Measure::Closeness, Measure::Betweenness);
  const std::vector<double> alphas = o.alpha ? std::vector<double>{*o.alpha} : kDefaultAlphaGrid;
  for (double a : alphas) {
    if (a == 0.0) continue;  // identical to the binary columns
    add_paths(a, Measure::WeightedCloseness, Measure::WeightedBetweenness);
  }

  // Columns follow the order of --measures when it is given.
  if (!selected.empty())
    std::stable_sort(cols.begin(), cols.end(), [&](const auto& x, const auto& y) {
      return std::find(selected.begin(), selected.end(), x.measure) <
             std::find(selected.begin(), selected.end(), y.measure);
    });

  const auto table = make_rank_table(net.flows.sectors(), cols);
  const auto fmt = output_format(o);
  with_output(o, out, [&](std::ostream& s) {
    if (o.top)
      write_top_table(s, table, *o.top, fmt);
    else
      write_rank_table(s, table, fmt);
  });
  if (!o.spearman.empty()) {
    std::ofstream file(o.spearman);
    if (!file) throw DomainError("cannot write '" + o.spearman + "'");
    write_spearman(file, table, fmt);
  }
}

Index sector_arg(const std::optional<long>& v, Index n, const char* name) {
  if (*v < 1 || *v > n)
    throw UsageError(std::string("--") + name + " must be within 1.." + std::to_string(n));
  return static_cast<Index>(*v - 1);
}

void cmd_oracle(const Options& o, std::ostream& out, std::ostream&) {
  const auto net = load_network(o, false);
  const auto m = build_transition(net.flows);
  const Index n = m.size();
  WalkConfig cfg;
  cfg.seed = o.seed;
  cfg.walks_per_pair = o.walks;
  cfg.max_steps = o.max_steps;
  cfg.workers = o.workers;
  const auto wopts = walk_options(o);
  if (o.source.has_value() != o.target.has_value())
    throw UsageError("--source and --target go together");

  std::vector<std::pair<Index, Index>> pairs;
  if (o.source) {
    pairs.emplace_back(sector_arg(o.source, n, "source"), sector_arg(o.target, n, "target"));
  } else {
    for (Index k = 0; k < n; ++k)
      for (Index j = 0; j < n; ++j)
        if (j != k) pairs.emplace_back(j, k);
  }
  const std::optional<Index> node =
      o.node ? std::optional<Index>(sector_arg(o.node, n, "node")) : std::nullopt;

  auto z = [](double analytic, const Estimate& e) {
    if (e.std_error == 0.0) return analytic == e.mean ? 0.0 : std::numeric_limits<double>::infinity();
    return (e.mean - analytic) / e.std_error;
  };

  with_output(o, out, [&](std::ostream& s) {
    s << "source,target,quantity,analytic,mc_mean,mc_stderr,z\n";
    for (auto [j, k] : pairs) {
      const auto passage = mfpt_to_target(m, k, wopts);
      const double h = passage.steps[j < k ? j : j - 1];
      const auto sim = simulate_walks(m, j, k, cfg);
      s << (j + 1) << ',' << (k + 1) << ",mfpt," << csv::format_number(h) << ','
        << csv::format_number(sim.steps.mean) << ',' << csv::format_number(sim.steps.std_error) << ','
        << csv::format_number(z(h, sim.steps)) << '\n';
      if (node) {
        const auto slice = visit_counts(m, k, wopts);
        const double v = slice(j, *node);
        const auto& e = sim.visits[static_cast<std::size_t>(*node)];
        s << (j + 1) << ',' << (k + 1) << ",visits:" << (*node + 1) << ',' << csv::format_number(v) << ','
          << csv::format_number(e.mean) << ',' << csv::format_number(e.std_error) << ','
          << csv::format_number(z(v, e)) << '\n';
      }
    }
  });
}

void cmd_aggregate(const Options& o, std::ostream& out, std::ostream&) {
  const auto net = load_network(o, false);
  with_output(o, out, [&](std::ostream& s) { csv::write_flows(s, net.flows); });
}

// --- option wiring ----------------------------------------------------------

void add_input_options(CLI::App* sub, Options& o) {
  sub->add_option("--flows", o.flows, "Flow or absorption matrix CSV (row i = purchases by sector i)")
      ->required();
  sub->add_option("--rpc", o.rpc,
                  "Regional purchase coefficients: full matrix CSV, or sector_id,value CSV "
                  "applied to the supplying sector's column");
  sub->add_option("--output-vector", o.output_vector,
                  "Annual industry output (sector_id,value); scales row i by output_i");
  sub->add_option("--employment", o.employment, "Employment coefficients (sector_id,value)");
  sub->add_option("--agg-map", o.agg_map, "Aggregation map CSV (fine_id,coarse_id,coarse_label)");
  sub->add_flag("--transpose", o.transpose, "Input rows are sales instead of purchases");
  sub->add_flag("--drop-isolated", o.drop_isolated, "Remove sectors with zero row and zero column");
  sub->add_option("--tol", o.tol, "Residual tolerance for linear solves")->capture_default_str();
  sub->add_flag("--allow-unreachable", o.allow_unreachable,
                "Flag scores touched by unreachable pairs as UNDEF instead of failing");
  sub->add_option("--out", o.out, "Output file (default: standard output)");
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--workers", o.workers, "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
}

void add_alpha(CLI::App* sub, Options& o, const char* help) {
  sub->add_option("--alpha", o.alpha, help)->check(CLI::NonNegativeNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ionet: key-sector centralities for input-output networks", "ionet"};
  app.require_subcommand(1);
  Options o;
  std::function<void(const Options&, std::ostream&, std::ostream&)> action;

  auto bind = [&](CLI::App* sub, auto fn) {
    add_input_options(sub, o);
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };

  auto* rwc = bind(app.add_subcommand("rwc", "Random walk centrality (immediate effects)"), cmd_rwc);
  rwc->add_option("--dump-mfpt", o.dump_mfpt, "Write the mean first-passage matrix to this CSV");

  auto* cbet = bind(app.add_subcommand("cbet", "Counting betweenness (mediative effects)"), cmd_cbet);
  cbet->add_flag("--cbet-exclude-endpoints", o.cbet_exclude_endpoints,
                 "Count only visits by walks that neither start nor end at the sector");

  auto* clo = bind(app.add_subcommand("closeness", "Weighted closeness (alpha = 0 is binary)"), cmd_closeness);
  add_alpha(clo, o, "Tie-strength tuning parameter (default 1)");

  auto* bet = bind(app.add_subcommand("betweenness", "Weighted betweenness (alpha = 0 is binary)"),
                   cmd_betweenness);
  add_alpha(bet, o, "Tie-strength tuning parameter (default 1)");
  bet->add_flag("--normalize", o.normalize, "Divide by (n-1)(n-2)");

  bind(app.add_subcommand("multipliers", "Output and employment multipliers"), cmd_multipliers);

  auto* all = bind(app.add_subcommand("rank-all", "Ranks under every measure, one column each"), cmd_rank_all);
  add_alpha(all, o, "Single alpha for the weighted columns (default grid 0.5, 1, 1.5)");
  all->add_flag("--normalize", o.normalize, "Normalize betweenness columns by (n-1)(n-2)");
  all->add_flag("--cbet-exclude-endpoints", o.cbet_exclude_endpoints,
                "Counting betweenness without source and target visits");
  all->add_option("--dump-mfpt", o.dump_mfpt, "Write the mean first-passage matrix to this CSV");
  all->add_option("--top", o.top, "Emit the top-n sectors per measure instead of the full table");
  all->add_option("--spearman", o.spearman, "Write Spearman correlations between measures to this file");
  all->add_option("--measures", o.measures, "Measure tags to include, in column order (default: all)")
      ->delimiter(',');

  auto* orc = bind(app.add_subcommand("oracle", "Compare analytic first-passage values with simulation"),
                   cmd_oracle);
  orc->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  orc->add_option("--walks", o.walks, "Walks per source-target pair")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  orc->add_option("--max-steps", o.max_steps, "Step cap per walk")->capture_default_str();
  orc->add_option("--source", o.source, "Source sector id (1-based)");
  orc->add_option("--target", o.target, "Target sector id (1-based)");
  orc->add_option("--node", o.node, "Also compare visit counts to this sector");

  auto* agg = bind(app.add_subcommand("aggregate", "Write the aggregated flow matrix"), cmd_aggregate);
  agg->get_option("--agg-map")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    action(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.error_class()) {
      case ErrorClass::Usage: return kUsageError;
      case ErrorClass::Data: return kDataError;
      case ErrorClass::Numerical: return kNumericalError;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kSuccess;
}

}  // namespace ionet::cli
