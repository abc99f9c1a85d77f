#include "cli.hpp"

#include "oldauth/attack.hpp"
#include "oldauth/capture.hpp"
#include "oldauth/error.hpp"
#include "oldauth/legacy_auth.hpp"
#include "oldauth/svg.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

namespace oldauth::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Input the user handed us cannot be used; maps to exit_usage.
struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// temp file + rename, so readers never see a half-written file
void write_file(const fs::path& path, std::string_view data) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw UsageError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw UsageError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

Response parse_response_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw UsageError("odd-length response hex");
  Response r;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(hex.data() + i, hex.data() + i + 2, v, 16);
    if (ec != std::errc() || ptr != hex.data() + i + 2) {
      throw UsageError("bad hex digit in response '" + hex + "'");
    }
    r.bytes.push_back(static_cast<std::uint8_t>(v));
  }
  return r;
}

// "16777216", "2^24" or "1<<24"
std::size_t parse_budget(const std::string& text) {
  auto number = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw UsageError("bad budget '" + text + "'");
    }
    return v;
  };
  std::string_view view(text);
  std::size_t at = view.find('^');
  std::size_t skip = 1;
  if (at == std::string_view::npos) {
    at = view.find("<<");
    skip = 2;
  }
  if (at == std::string_view::npos) return number(view);
  const std::uint64_t base = number(view.substr(0, at));
  const std::uint64_t exp = number(view.substr(at + skip));
  if (base != 2 || exp > 62) throw UsageError("budget must be 2^k with k <= 62, got '" + text + "'");
  return std::size_t{1} << exp;
}

std::vector<int> parse_cells(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw UsageError("bad cell exponent list '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<HashHalves> read_candidates(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<HashHalves> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    try {
      out.push_back(parse_hash_halves(line));
    } catch (const ParseError&) {
      throw ParseError(ParseError::Unit::line, number, "expected h1:h2, got '" + line + "'");
    }
  }
  return out;
}

json stage_json(const StageLog& s) {
  json j{{"stage", s.stage}, {"seconds", s.seconds}};
  if (s.pair >= 0) j["pair"] = s.pair;
  if (s.stage == "procedure1") {
    j["polygons"] = s.polygons;
    j["area"] = s.area;
    j["w9"] = s.w9;
  } else if (s.stage == "procedure2") {
    j["round"] = s.round;
    j["cell_exponent"] = s.cell_exponent;
    j["pieces"] = s.pieces;
    j["area"] = s.area;
  } else if (s.stage == "extract") {
    j["pieces"] = s.pieces;
    j["points"] = s.points;
    j["survivors"] = s.survivors;
  } else {
    j["survivors"] = s.survivors;
  }
  return j;
}

struct Options {
  bool real_mode = false;
  std::uint64_t seed = 0;

  std::string password;
  std::string hash;
  std::string challenge;
  std::string response;

  std::size_t count = 0;
  std::string out;
  std::string capture;
  std::string user = "root";

  std::string trace;
  std::size_t p1_pairs = 5;
  std::string cells = "24,20,16,12,8";
  std::string budget = "2^24";
  std::string svg_dir;
  std::string report;

  std::string candidates;
  std::string truth;
  std::size_t trials = 1000;
};

ScrambleParams scramble_params(const Options& o) {
  ScrambleParams p;
  p.reduce_seeds = o.real_mode;
  return p;
}

HashHalves password_or_hash(const Options& o) {
  if (!o.hash.empty()) return parse_hash_halves(o.hash);
  return hash_password(o.password);
}

int cmd_hash(const Options& o, std::ostream& out) {
  out << to_string(hash_password(o.password)) << '\n';
  return exit_ok;
}

int cmd_scramble(const Options& o, std::ostream& out) {
  const Response r = scramble(password_or_hash(o), hash_password(o.challenge), scramble_params(o));
  out << r.hex() << '\n';
  return exit_ok;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Response r = parse_response_hex(o.response);
  const bool ok = verify(password_or_hash(o), o.challenge, r, scramble_params(o));
  out << (ok ? "match" : "mismatch") << '\n';
  return ok ? exit_ok : exit_negative;
}

int cmd_gen(const Options& o, std::ostream& out) {
  const auto records = generate_sessions(o.password, o.count, o.seed, scramble_params(o));
  write_file(o.out, format_trace(records));
  if (!o.capture.empty()) {
    std::vector<std::string> users(records.size(), o.user);
    const auto bytes = emit_capture(records, users);
    write_file(o.capture, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  }
  out << records.size() << " sessions\n";
  return exit_ok;
}

int cmd_parse(const Options& o, std::ostream& out) {
  const std::string raw = read_file(o.capture);
  const auto sessions = parse_capture(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
  std::vector<TraceRecord> records;
  for (const auto& s : sessions) records.push_back(s.record);
  write_file(o.out, format_trace(records));
  out << records.size() << " sessions\n";
  return exit_ok;
}

int cmd_attack(const Options& o, std::ostream& out, std::ostream& err) {
  const ScrambleParams params = scramble_params(o);
  const auto records = parse_trace(read_file(o.trace));
  std::vector<ChallengeResponsePair> pairs;
  for (const auto& rec : records) pairs.push_back(rec.to_pair());

  AttackConfig config;
  config.p1_pairs = o.p1_pairs;
  config.cell_exponents = parse_cells(o.cells);
  config.sieve_budget = parse_budget(o.budget);
  try {
    config.validate(params);
  } catch (const MalformedInput& e) {
    throw UsageError(e.what());
  }

  AttackObserver observer;
  if (!o.svg_dir.empty()) {
    fs::create_directories(o.svg_dir);
    observer.on_polygon_set = [&](std::size_t i, const PolygonSet& set) {
      const std::string name = "procedure1_pair" + std::to_string(i);
      write_file(fs::path(o.svg_dir) / (name + ".svg"),
                 render_svg(set.polygons, params.half_width_bits, name));
    };
    observer.on_pieces = [&](int round, int m, const std::vector<CellPiece>& pieces) {
      std::vector<ConvexPolygon> polys;
      polys.reserve(pieces.size());
      for (const auto& p : pieces) polys.push_back(p.fragment);
      const std::string name = "procedure2_round" + std::to_string(round);
      write_file(fs::path(o.svg_dir) / (name + ".svg"),
                 render_svg(polys, params.half_width_bits, name + " m=" + std::to_string(m)));
    };
  }

  AttackResult result;
  try {
    result = run_attack(pairs, config, params, &observer);
  } catch (const MalformedInput& e) {
    throw UsageError(e.what());
  } catch (const NoPolygonError& e) {
    err << "attack failed: " << e.what() << '\n';
    return exit_negative;
  } catch (const BudgetExceeded& e) {
    err << "attack failed: " << e.what() << '\n';
    return exit_negative;
  }

  std::string listing;
  for (const auto& h : result.candidates.points) listing += to_string(h) + '\n';
  if (!o.out.empty()) write_file(o.out, listing);

  if (!o.report.empty()) {
    json report{{"pairs", pairs.size()},
                {"config",
                 {{"p1_pairs", config.p1_pairs},
                  {"cell_exponents", config.cell_exponents},
                  {"sieve_budget", config.sieve_budget},
                  {"password_bits", config.effective_password_bits(params)}}},
                {"stages", json::array()},
                {"candidates", result.candidates.points.size()},
                {"warnings", result.warnings},
                {"seconds", result.seconds}};
    for (const auto& s : result.stages) report["stages"].push_back(stage_json(s));
    write_file(o.report, report.dump(2) + '\n');
  }

  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  out << result.candidates.points.size() << " candidates from " << pairs.size() << " pairs in "
      << std::fixed << std::setprecision(2) << result.seconds << " s\n";
  if (o.out.empty()) out << listing;
  return result.candidates.points.empty() ? exit_negative : exit_ok;
}

int cmd_score(const Options& o, std::ostream& out) {
  CandidateSet set;
  set.points = read_candidates(o.candidates);
  const HashHalves truth = parse_hash_halves(o.truth);
  const auto scores = score_candidates(set, truth, o.trials, o.seed, scramble_params(o));
  double sum = 0;
  for (const auto& s : scores) {
    out << to_string(s.candidate) << ' ' << std::fixed << std::setprecision(3) << s.rate() << '\n';
    sum += s.rate();
  }
  if (!scores.empty()) {
    out << "# mean " << std::fixed << std::setprecision(3) << sum / scores.size() << " over "
        << scores.size() << " candidates\n";
  }
  return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Legacy challenge/response login tools and passive hash recovery"};
  app.name(args.empty() ? "oldauth" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  Options o;

  auto* hash = app.add_subcommand("hash", "print the h1:h2 hash of a password");
  hash->add_option("password", o.password, "password text")->required();

  auto add_secret = [&](CLI::App* cmd) {
    auto* pw = cmd->add_option("--password", o.password, "password text");
    auto* h = cmd->add_option("--hash", o.hash, "password hash as h1:h2");
    pw->excludes(h);
    cmd->add_flag("--real-mode", o.real_mode, "reduce seeds mod n before the first step");
  };

  auto* scr = app.add_subcommand("scramble", "compute the response for a challenge");
  add_secret(scr);
  scr->add_option("--challenge", o.challenge, "challenge text")->required();

  auto* ver = app.add_subcommand("verify", "check a response; exit 1 on mismatch");
  add_secret(ver);
  ver->add_option("--challenge", o.challenge, "challenge text")->required();
  ver->add_option("--response", o.response, "response bytes in hex")->required();

  auto* gen = app.add_subcommand("gen", "simulate login sessions");
  gen->add_option("--password", o.password, "password text")->required();
  gen->add_option("--count", o.count, "number of sessions")->required();
  gen->add_option("--seed", o.seed, "generator seed")->capture_default_str();
  gen->add_option("--out", o.out, "trace file to write")->required();
  gen->add_option("--capture", o.capture, "also write a framed handshake capture");
  gen->add_option("--user", o.user, "user name in the capture")->capture_default_str();
  gen->add_flag("--real-mode", o.real_mode, "reduce seeds mod n before the first step");

  auto* parse = app.add_subcommand("parse", "convert a handshake capture to a trace");
  parse->add_option("--capture", o.capture, "capture file")->required();
  parse->add_option("--out", o.out, "trace file to write")->required();

  auto* atk = app.add_subcommand("attack", "recover candidate password hashes from a trace");
  atk->add_option("--trace", o.trace, "trace file")->required();
  atk->add_option("--p1-pairs", o.p1_pairs, "pairs turned into polygon sets")->capture_default_str();
  atk->add_option("--cells", o.cells, "cell exponent schedule, comma separated")
      ->capture_default_str();
  atk->add_option("--budget", o.budget, "lattice point budget, e.g. 2^24")->capture_default_str();
  atk->add_option("--out", o.out, "candidate file (one h1:h2 per line)");
  atk->add_option("--svg", o.svg_dir, "directory for polygon drawings");
  atk->add_option("--report", o.report, "JSON report file");

  auto* score = app.add_subcommand("score", "pass rate of candidates on fresh challenges");
  score->add_option("--candidates", o.candidates, "candidate file")->required();
  score->add_option("--truth", o.truth, "true hash as h1:h2")->required();
  score->add_option("--trials", o.trials, "fresh challenges per candidate")->capture_default_str();
  score->add_option("--seed", o.seed, "challenge seed")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("oldauth");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (hash->parsed()) return cmd_hash(o, out);
    if (scr->parsed()) return cmd_scramble(o, out);
    if (ver->parsed()) return cmd_verify(o, out);
    if (gen->parsed()) return cmd_gen(o, out);
    if (parse->parsed()) return cmd_parse(o, out);
    if (atk->parsed()) return cmd_attack(o, out, err);
    if (score->parsed()) return cmd_score(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_usage;
  } catch (const MalformedInput& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace oldauth::cli
