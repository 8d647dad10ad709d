#include "intrank/report.hpp"

#include "intrank/io.hpp"

namespace intrank {

Json report_header(const std::string& command, const std::string& input_digest) {
  Json j;
  j["command"] = command;
  j["input_digest"] = input_digest;
  return j;
}

namespace {

Json sign_vector_json(const SignVector& s) {
  Json out = Json::array();
  for (int v : s) out.push_back(v);
  return out;
}

}  // namespace

Json json_of(const FullRankVerdict& v) {
  Json j;
  j["full_rank"] = v.full_rank;
  if (v.square_violation) {
    Json c;
    c["x"] = sign_vector_json(v.square_violation->x);
    c["y"] = sign_vector_json(v.square_violation->y);
    c["det_mid"] = v.square_violation->det_mid.get_str();
    c["det_perturbed"] = v.square_violation->det_perturbed.get_str();
    j["certificate"] = c;
  } else if (v.orthant_violation) {
    Json c;
    c["orthant"] = sign_vector_json(v.orthant_violation->orthant);
    Json w = Json::array();
    for (const Rational& x : v.orthant_violation->witness) w.push_back(x.get_str());
    c["witness"] = w;
    j["certificate"] = c;
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

Json json_of(const CertReport& r) {
  Json j;
  j["contained"] = r.contained;
  j["rank"] = r.computed_rank;
  j["rank_ok"] = r.rank_ok;
  j["degenerate_exact"] = r.degenerate_exact;
  j["pass"] = r.pass();
  Json v = Json::array();
  for (const std::string& s : r.violations) v.push_back(s);
  j["violations"] = v;
  return j;
}

Json json_of(const RealizationResult& r) {
  Json j;
  j["target_rank"] = r.target_rank;
  j["mode"] = r.mode == RankMode::Exact ? "exact" : "at-most";
  j["matrix"] = format_rational_matrix(r.matrix);
  return j;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConstructionFailed:
    case ErrorKind::Internal:
      return 3;
    default:
      return 2;
  }
}

}  // namespace intrank
