// Command-line front end: full-rank tests, rank realization from witness
// certificates, and the seeded instance generator.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "intrank/fullrank.hpp"
#include "intrank/instance.hpp"
#include "intrank/io.hpp"
#include "intrank/report.hpp"

namespace {

using namespace intrank;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   start)
      .count();
}

int run_fullrank(const std::string& file, bool oracle, bool force,
                 const std::string& out) {
  auto start = std::chrono::steady_clock::now();
  std::string text = read_file(file);
  IntervalMatrix m = parse_interval_matrix(text);

  Json rep = report_header("fullrank " + file, digest_hex(text));
  FullRankVerdict verdict;
  if (m.rows() == m.cols()) {
    if (m.rows() > 8 && !force)
      fail(ErrorKind::TooLarge,
           "square test enumerates 4^p sign pairs; pass --force beyond p = 8");
    verdict = square_full_rank(m);
    rep["method"] = "square-sign-pairs";
  } else if (m.rows() >= m.cols()) {
    verdict = rect_full_rank(m);
    rep["method"] = "orthant-lp";
  } else {
    // full rank is transpose-invariant; the orthant test wants p >= q
    IntervalMatrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    verdict = rect_full_rank(t);
    rep["method"] = "orthant-lp-transposed";
  }
  rep["outcome"] = json_of(verdict);
  if (oracle) {
    bool agree = regularity_oracle(m) == verdict.full_rank;
    rep["oracle_agrees"] = agree;
    internal_check(agree, "vertex oracle disagrees with the sign-pair test");
  }
  rep["timing_ms"] = elapsed_ms(start);
  std::string payload = rep.dump(2) + "\n";
  if (out.empty())
    std::cout << payload;
  else
    write_file(out, payload);
  return verdict.full_rank ? 0 : 1;
}

int run_realize(const std::string& matrix_file, const std::string& witness_file,
                const std::string& rank_token, const std::string& mode_token,
                const std::string& out_matrix, const std::string& out_report) {
  auto start = std::chrono::steady_clock::now();
  std::string mtext = read_file(matrix_file);
  IntervalMatrix alpha = parse_interval_matrix(mtext);

  Witness w = std::monostate{};
  std::string digest = digest_hex(mtext);
  if (!witness_file.empty()) {
    std::string wtext = read_file(witness_file);
    w = parse_witness(wtext);
    digest = digest_hex(mtext + wtext);
    if (witness_rows(w) != alpha.rows() || witness_cols(w) != alpha.cols())
      fail(ErrorKind::WitnessInvalid, "witness dimensions differ from the matrix");
  }

  const std::size_t q = alpha.cols();
  std::size_t r = 0;
  if (rank_token == "q") {
    r = q;
  } else if (rank_token == "q-1") {
    if (q < 1) fail(ErrorKind::UnsupportedRank, "q-1 undefined");
    r = q - 1;
  } else if (rank_token == "q-2") {
    if (q < 2) fail(ErrorKind::UnsupportedRank, "q-2 undefined");
    r = q - 2;
  } else {
    r = static_cast<std::size_t>(std::stoul(rank_token));
  }
  RankMode mode = mode_token == "atmost" ? RankMode::AtMost : RankMode::Exact;

  Json rep = report_header(
      "realize " + matrix_file + " " + witness_file + " --rank " + rank_token, digest);
  Realized result = realize(alpha, w, r, mode);
  if (auto* nw = std::get_if<NoWitness>(&result)) {
    rep["outcome"] = "no-witness";
    rep["reason"] = nw->reason;
    rep["timing_ms"] = elapsed_ms(start);
    std::string payload = rep.dump(2) + "\n";
    if (out_report.empty())
      std::cout << payload;
    else
      write_file(out_report, payload);
    return 1;
  }
  const RealizationResult& res = std::get<RealizationResult>(result);
  rep["outcome"] = json_of(res);
  rep["certificate"] = json_of(check_certificate(alpha, res));
  rep["timing_ms"] = elapsed_ms(start);
  if (!out_matrix.empty()) write_file(out_matrix, format_rational_matrix(res.matrix));
  std::string payload = rep.dump(2) + "\n";
  if (out_report.empty())
    std::cout << payload;
  else
    write_file(out_report, payload);
  return 0;
}

int run_gen(const InstanceSpec& spec, const std::string& prefix) {
  auto start = std::chrono::steady_clock::now();
  PlantedInstance inst = plant(spec);
  std::string alpha_text = format_interval_matrix(inst.alpha);
  write_file(prefix + ".alpha", alpha_text);
  Json rep = report_header("gen", digest_hex(alpha_text));
  rep["p"] = inst.alpha.rows();
  rep["q"] = inst.alpha.cols();
  rep["rank_class"] = spec.rank_class;
  rep["target_rank"] = inst.target_rank;
  rep["d"] = spec.d;
  rep["radius"] = spec.enclosure_radius.get_str();
  rep["degenerate_fraction"] = spec.degenerate_fraction.get_str();
  rep["seed"] = spec.seed;
  rep["alpha_file"] = prefix + ".alpha";
  if (!std::holds_alternative<std::monostate>(inst.witness)) {
    std::string wtext =
        format_witness(inst.witness, inst.alpha.rows(), inst.alpha.cols());
    write_file(prefix + ".witness", wtext);
    rep["witness_file"] = prefix + ".witness";
  }
  rep["timing_ms"] = elapsed_ms(start);
  std::cout << rep.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact rank analysis and rational rank realization for interval "
               "matrices with rational endpoints"};
  app.require_subcommand(1);

  auto* full = app.add_subcommand(
      "fullrank", "Decide whether an interval matrix has full rank");
  std::string full_file, full_out;
  bool oracle = false, force = false;
  full->add_option("file", full_file, "interval matrix file")->required();
  full->add_flag("--oracle", oracle, "cross-check with the vertex determinant oracle");
  full->add_flag("--force", force, "run the square test past p = 8");
  full->add_option("--out", full_out, "write the report here instead of stdout");

  auto* real = app.add_subcommand(
      "realize", "Construct a rational matrix of prescribed rank inside the box");
  std::string real_matrix, real_witness, real_rank = "q", real_mode = "exact";
  std::string real_out, real_report;
  real->add_option("matrix", real_matrix, "interval matrix file")->required();
  real->add_option("witness", real_witness, "witness file (omit for rank 0)");
  real->add_option("--rank", real_rank, "target rank: number or q, q-1, q-2")
      ->required();
  real->add_option("--mode", real_mode, "exact (default) or atmost")
      ->check(CLI::IsMember({"exact", "atmost"}));
  real->add_option("--out", real_out, "write the realized matrix here");
  real->add_option("--report", real_report, "write the report here instead of stdout");

  auto* gen = app.add_subcommand("gen", "Generate a planted (witness, matrix) pair");
  InstanceSpec spec;
  std::string radius = "1/10", fraction = "0", prefix = "instance", target;
  long gen_p = 3, gen_q = 3;
  unsigned long long gen_seed = 0;
  long long gen_d = 2;
  gen->add_option("--p", gen_p, "rows");
  gen->add_option("--q", gen_q, "columns");
  gen->add_option("--rank", spec.rank_class, "rank class: 0, 1, 2, q-2, q-1, q")
      ->required();
  gen->add_option("--d", gen_d, "radicand of the quadratic field");
  gen->add_option("--radius", radius, "enclosure radius (rational)");
  gen->add_option("--deg-fraction", fraction, "fraction of rational cells to pin");
  gen->add_option("--case", target, "force a specific proof branch");
  gen->add_option("--seed", gen_seed, "generator seed (required for reproducibility)")
      ->required();
  gen->add_option("--out-prefix", prefix, "output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    if (*full) return run_fullrank(full_file, oracle, force, full_out);
    if (*real)
      return run_realize(real_matrix, real_witness, real_rank, real_mode, real_out,
                         real_report);
    spec.p = static_cast<std::size_t>(gen_p);
    spec.q = static_cast<std::size_t>(gen_q);
    spec.d = gen_d;
    spec.seed = gen_seed;
    spec.enclosure_radius = parse_rational(radius);
    spec.degenerate_fraction = parse_rational(fraction);
    if (!target.empty()) spec.case_targets.push_back(target);
    return run_gen(spec, prefix);
  } catch (const intrank::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const intrank::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
