#include "expgame/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "expgame/errors.hpp"

namespace expgame {
namespace {

using nlohmann::json;

json parse_object(const std::string& text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidParams(std::string(what) + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw InvalidParams(std::string(what) + ": expected a JSON object");
  return j;
}

void check_keys(const json& j, const std::set<std::string>& required,
                const std::set<std::string>& optional, const char* what) {
  for (const auto& [key, _] : j.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw InvalidParams(std::string(what) + ": unknown key '" + key + "'");
    }
  }
  for (const auto& key : required) {
    if (!j.contains(key)) throw InvalidParams(std::string(what) + ": missing key '" + key + "'");
  }
}

double number(const json& j, const std::string& key, const char* what) {
  const json& v = j.at(key);
  if (!v.is_number()) throw InvalidParams(std::string(what) + ": '" + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& j, const std::string& key, const char* what) {
  const json& v = j.at(key);
  if (!v.is_array()) throw InvalidParams(std::string(what) + ": '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw InvalidParams(std::string(what) + ": '" + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

GameParams game_params_from_json(const std::string& text) {
  constexpr const char* what = "game parameters";
  const json j = parse_object(text, what);
  check_keys(j, {"n_agents", "lambda", "discount", "pi_s", "r_w", "r_l", "pi_w", "pi_l"}, {}, what);
  const json& n = j.at("n_agents");
  if (!n.is_number_integer()) throw InvalidParams("game parameters: 'n_agents' must be an integer");
  GameParams g;
  g.n_agents = n.get<int>();
  g.lambda = number(j, "lambda", what);
  g.discount = number(j, "discount", what);
  g.pi_s = number(j, "pi_s", what);
  g.r_w = number(j, "r_w", what);
  g.r_l = number(j, "r_l", what);
  g.pi_w = number(j, "pi_w", what);
  g.pi_l = number(j, "pi_l", what);
  return g;
}

std::string to_json(const GameParams& g) {
  nlohmann::ordered_json j;
  j["n_agents"] = g.n_agents;
  j["lambda"] = g.lambda;
  j["discount"] = g.discount;
  j["pi_s"] = g.pi_s;
  j["r_w"] = g.r_w;
  j["r_l"] = g.r_l;
  j["pi_w"] = g.pi_w;
  j["pi_l"] = g.pi_l;
  return j.dump();
}

SharingContract contract_from_json(const std::string& text) {
  constexpr const char* what = "contract";
  const json j = parse_object(text, what);
  check_keys(j, {"alpha_i", "alpha_c"}, {"family"}, what);
  SharingContract c;
  if (j.contains("family")) {
    if (!j.at("family").is_string()) throw InvalidParams("contract: 'family' must be a string");
    c.family = family_from_string(j.at("family").get<std::string>());
  }
  c.alpha_i = number(j, "alpha_i", what);
  c.alpha_c = number(j, "alpha_c", what);
  return c;
}

std::string to_json(const SharingContract& c) {
  nlohmann::ordered_json j;
  j["family"] = std::string(to_string(c.family));
  j["alpha_i"] = c.alpha_i;
  j["alpha_c"] = c.alpha_c;
  return j.dump();
}

HeteroParams hetero_params_from_json(const std::string& text) {
  constexpr const char* what = "heterogeneous parameters";
  const json j = parse_object(text, what);
  check_keys(j, {"mu", "lambda", "discount", "pi_s", "r_l", "pi_l", "r_total", "pi_total"}, {}, what);
  HeteroParams hp;
  hp.mu = numbers(j, "mu", what);
  hp.lambda = number(j, "lambda", what);
  hp.discount = number(j, "discount", what);
  hp.pi_s = number(j, "pi_s", what);
  hp.r_l = numbers(j, "r_l", what);
  hp.pi_l = numbers(j, "pi_l", what);
  hp.r_total = number(j, "r_total", what);
  hp.pi_total = number(j, "pi_total", what);
  if (hp.r_l.size() != hp.mu.size() || hp.pi_l.size() != hp.mu.size()) {
    throw InvalidParams("heterogeneous parameters: per-agent arrays must have equal length");
  }
  return hp;
}

std::string to_json(const HeteroParams& hp) {
  nlohmann::ordered_json j;
  j["mu"] = hp.mu;
  j["lambda"] = hp.lambda;
  j["discount"] = hp.discount;
  j["pi_s"] = hp.pi_s;
  j["r_l"] = hp.r_l;
  j["pi_l"] = hp.pi_l;
  j["r_total"] = hp.r_total;
  j["pi_total"] = hp.pi_total;
  return j.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParams("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string make_csv(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::string s;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) s += ',';
    s += header[c];
  }
  s += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw PreconditionError("CSV row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) s += ',';
      s += format_double(row[c]);
    }
    s += '\n';
  }
  return s;
}

}  // namespace expgame
