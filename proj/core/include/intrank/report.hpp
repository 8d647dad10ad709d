#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "intrank/fullrank.hpp"
#include "intrank/instance.hpp"
#include "intrank/realize.hpp"

namespace intrank {

// Run reports keep a stable field order (ordered_json) so repeated runs are
// byte-identical apart from the timing field.
using Json = nlohmann::ordered_json;

Json report_header(const std::string& command, const std::string& input_digest);

Json json_of(const FullRankVerdict& v);
Json json_of(const CertReport& r);
Json json_of(const RealizationResult& r);

// canonical exit codes: 0 success, 1 negative verdict, 2 input error,
// 3 internal defect
int exit_code_for(ErrorKind kind);

}  // namespace intrank
