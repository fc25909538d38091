#pragma once

#include <string>
#include <vector>

#include "expgame/contracts.hpp"
#include "expgame/hetero.hpp"
#include "expgame/params.hpp"

namespace expgame {

/// Flat JSON object with exactly the keys n_agents, lambda, discount, pi_s,
/// r_w, r_l, pi_w, pi_l. Unknown or missing keys and non-numeric values throw
/// InvalidParams. The result is not validated.
[[nodiscard]] GameParams game_params_from_json(const std::string& text);
[[nodiscard]] std::string to_json(const GameParams& params);

/// {"family", "alpha_i", "alpha_c"}; family defaults to WinnerBased.
[[nodiscard]] SharingContract contract_from_json(const std::string& text);
[[nodiscard]] std::string to_json(const SharingContract& contract);

/// {"mu", "lambda", "discount", "pi_s", "r_l", "pi_l", "r_total", "pi_total"}
/// with per-agent arrays of equal length.
[[nodiscard]] HeteroParams hetero_params_from_json(const std::string& text);
[[nodiscard]] std::string to_json(const HeteroParams& hp);

[[nodiscard]] std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Shortest decimal text that reads back as the same double ("inf"/"-inf"/"nan"
/// for non-finite values).
[[nodiscard]] std::string format_double(double x);

/// CSV with a header row; every row must have as many cells as the header.
[[nodiscard]] std::string make_csv(const std::vector<std::string>& header,
                                   const std::vector<std::vector<double>>& rows);

}  // namespace expgame
