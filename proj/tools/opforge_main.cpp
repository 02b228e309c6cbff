// SPDX-License-Identifier: Apache-2.0
//
// opforge — command-line front end for the opaque predicate toolkit.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "opforge/errors.hpp"
#include "opforge/experiments.hpp"
#include "opforge/generators.hpp"
#include "opforge/hdl.hpp"
#include "opforge/klepto.hpp"
#include "opforge/state_encoding.hpp"
#include "opforge/watermark.hpp"

using json = nlohmann::json;
using namespace opforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitBudget = 3;
constexpr int kExitUsage = 64;

uint64_t default_seed() {
  if (const char* env = std::getenv("OPFORGE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("OPFORGE_SEED must be an unsigned integer");
    }
  }
  std::random_device rd;
  const auto now = std::chrono::steady_clock::now().time_since_epoch().count();
  return (uint64_t{rd()} << 32) ^ uint64_t(now);
}

std::string state_bits(uint32_t value, uint32_t width) {
  std::string s;
  for (uint32_t i = width; i-- > 0;)
    s += ((value >> i) & 1) ? '1' : '0';
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

std::vector<uint8_t> payload_from_string(const std::string& text) {
  std::vector<uint8_t> bits;
  for (char c : text) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("payload must be a 0/1 string");
    bits.push_back(static_cast<uint8_t>(c - '0'));
  }
  return bits;
}

std::string payload_to_string(const std::vector<uint8_t>& bits) {
  std::string s;
  for (uint8_t b : bits)
    s += b ? '1' : '0';
  return s;
}

struct GenArgs {
  std::string algo;
  uint32_t n = 0;
  uint32_t t = 0;
  std::string reset_hex = "0";
  std::optional<uint64_t> seed;
  std::string emit;
  std::string out_path;
  std::string module_name = "opaque_pred";
  std::string constant; // plan fanout wiring onto this value
  uint64_t budget = RndOptions{}.attempt_budget;
  bool t_is_min = false;
};

int run_gen(const GenArgs& args, bool json_output) {
  const uint64_t seed = args.seed ? *args.seed : default_seed();
  SeededRng rng(seed);
  const uint32_t reset = static_cast<uint32_t>(std::stoul(args.reset_hex, nullptr, 16));

  OpaquePredicate pred;
  RndStats stats;
  if (args.algo == "qm") {
    pred = qm_generate(args.n, reset, args.t, rng, args.t_is_min);
  } else if (args.algo == "qmx") {
    pred = qmx_generate(args.n, reset, args.t, rng, args.t_is_min);
  } else {
    RndOptions options;
    options.attempt_budget = args.budget;
    pred = rnd_generate(args.n, reset, args.t, rng, options, &stats);
  }

  // Every register bit is fixed once the predicate has stabilized, so a
  // requested constant simply fans out from matching bits of z.
  std::optional<WiringPlan> wiring;
  if (!args.constant.empty()) {
    std::vector<FixedPosition> fixed;
    for (uint32_t i = 0; i < args.n; ++i)
      fixed.push_back({i, static_cast<uint8_t>((pred.stable_state >> i) & 1)});
    wiring = plan_wiring(fixed, parse_bits(args.constant));
  }

  if (args.emit == "verilog") {
    write_file(args.out_path, emit_verilog(pred, wiring, args.module_name));
  } else if (args.emit == "netlist") {
    emit_netlist_file(pred, wiring, args.out_path);
  }

  if (json_output) {
    json j{{"algorithm", args.algo},
           {"n", args.n},
           {"seed", seed},
           {"reset", state_bits(reset, args.n)},
           {"stable", state_bits(pred.stable_state, args.n)},
           {"delay", pred.delay},
           {"gates",
            {{"not", pred.counts.not_count},
             {"and", pred.counts.and_count},
             {"or", pred.counts.or_count},
             {"xor", pred.counts.xor_count},
             {"total", pred.counts.total()}}}};
    if (args.algo == "rnd")
      j["attempts"] = stats.attempts;
    if (wiring) {
      json wires = json::array();
      for (size_t jj = 0; jj < wiring->ff_for_bit.size(); ++jj)
        wires.push_back({{"constant_bit", jj}, {"ff", wiring->ff_for_bit[jj]}});
      j["wiring"] = wires;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "algorithm: " << args.algo << "\n"
              << "n: " << args.n << "\n"
              << "seed: " << seed << "\n"
              << "reset: " << state_bits(reset, args.n) << "\n"
              << "stable: " << state_bits(pred.stable_state, args.n) << "\n"
              << "delay: " << pred.delay << "\n"
              << "gates: not=" << pred.counts.not_count << " and=" << pred.counts.and_count
              << " or=" << pred.counts.or_count << " xor=" << pred.counts.xor_count
              << " total=" << pred.counts.total() << "\n";
    if (args.algo == "rnd")
      std::cout << "attempts: " << stats.attempts << "\n";
    if (wiring) {
      std::cout << "wiring:";
      for (size_t j = 0; j < wiring->ff_for_bit.size(); ++j)
        std::cout << " C" << j << "<-FF" << wiring->ff_for_bit[j];
      std::cout << "\n";
    }
    if (!args.emit.empty())
      std::cout << "emitted: " << args.out_path << "\n";
  }
  return kExitOk;
}

struct EncodeArgs {
  std::string states_path;
  std::string subset_csv;
  std::string constant;
  uint32_t n = 0;
  std::optional<uint64_t> seed;
  bool allow_invert = false;
};

int run_encode(const EncodeArgs& args) {
  const uint64_t seed = args.seed ? *args.seed : default_seed();
  SeededRng rng(seed);

  // States file: one state per line, "name" or "name <binary code>".
  std::vector<std::string> names;
  std::map<std::string, uint32_t> pinned;
  {
    std::istringstream in(read_file(args.states_path));
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream tokens(line);
      std::string name, code;
      if (!(tokens >> name))
        continue;
      names.push_back(name);
      if (tokens >> code) {
        uint32_t value = 0;
        for (char c : code) {
          if (c != '0' && c != '1')
            throw std::runtime_error("bad pinned code for state " + name);
          value = (value << 1) | static_cast<uint32_t>(c - '0');
        }
        pinned[name] = value;
      }
    }
  }

  std::vector<std::string> subset;
  {
    std::istringstream in(args.subset_csv);
    std::string item;
    while (std::getline(in, item, ','))
      if (!item.empty())
        subset.push_back(item);
  }

  const std::vector<uint8_t> constant = parse_bits(args.constant);
  auto [assignment, wiring] =
      encode_states(names, subset, constant, args.n, rng, pinned, args.allow_invert);

  json codes = json::object();
  for (const auto& [name, code] : assignment.codes)
    codes[name] = state_bits(code, args.n);
  json fixed = json::array();
  for (const FixedPosition& pos : assignment.fixed_positions)
    fixed.push_back({{"bit", pos.bit}, {"value", pos.value}});
  json wires = json::array();
  for (size_t j = 0; j < wiring.ff_for_bit.size(); ++j) {
    json wire{{"constant_bit", j}, {"ff", wiring.ff_for_bit[j]}};
    if (wiring.bit_inverted(j))
      wire["inverted"] = true;
    wires.push_back(wire);
  }
  json report{{"seed", seed},
              {"constant", args.constant},
              {"fixed_positions", fixed},
              {"codes", codes},
              {"wiring", wires}};
  std::cout << report.dump(2) << "\n";
  return kExitOk;
}

struct TableArgs {
  uint32_t trials = 1000;
  std::optional<uint64_t> seed;
  std::string out_path;
  std::string format = "csv";
  std::vector<uint32_t> n_values;
  std::vector<uint32_t> t_values;
};

int run_table_cmd(const TableArgs& args) {
  ExperimentConfig config;
  config.trials = args.trials;
  config.master_seed = args.seed ? *args.seed : default_seed();
  if (!args.n_values.empty())
    config.n_values = args.n_values;
  if (!args.t_values.empty())
    config.t_values = args.t_values;

  std::cerr << "seed: " << config.master_seed << "\n";
  const ResultTable table = run_table(config);
  const std::string report = render_report(
      table, args.format == "markdown" ? ReportFormat::Markdown : ReportFormat::Csv);
  if (args.out_path.empty())
    std::cout << report;
  else
    write_file(args.out_path, report);
  return kExitOk;
}

struct KleptoDemoArgs {
  uint32_t lambda = 256;
  uint32_t adv_bits = 0; // 0: same as lambda
  uint64_t i_max = 64;
  std::optional<uint64_t> seed;
  std::string export_path;
};

int run_klepto_demo(const KleptoDemoArgs& args, bool json_output) {
  const uint64_t seed = args.seed ? *args.seed : default_seed();
  SeededRng rng(seed);
  const uint32_t adv_bits = args.adv_bits ? args.adv_bits : args.lambda;

  const AdversaryKey adv = make_adversary_key(adv_bits, rng);
  const AdversaryPublicKey adv_pub{adv.n_adv, adv.e_adv};
  const SubvertedKeygenResult generated = subverted_keygen(args.lambda, adv_pub, rng);
  const RsaKeyPair& kp = generated.key;

  const bool valid = verify_keypair(kp);
  const auto recovered = attacker_recover(kp.n, kp.e, adv, args.i_max);
  const bool hit = recovered && (recovered->first == kp.p || recovered->first == kp.q);

  if (json_output) {
    json j{{"seed", seed},
           {"lambda", args.lambda},
           {"adversary", {{"n", adv.n_adv.to_hex()}, {"e", adv.e_adv.to_hex()}}},
           {"keypair",
            {{"n", kp.n.to_hex()},
             {"e", kp.e.to_hex()},
             {"d", kp.d.to_hex()},
             {"p", kp.p.to_hex()},
             {"q", kp.q.to_hex()}}},
           {"e_increments", generated.e_increments},
           {"valid", valid},
           {"recovered", hit}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "seed: " << seed << "\n"
              << "adversary public key: N=" << adv.n_adv.to_hex() << " E=" << adv.e_adv.to_hex()
              << "\n"
              << "subverted keypair (" << args.lambda << " bit):\n"
              << "  n = " << kp.n.to_hex() << "\n"
              << "  e = " << kp.e.to_hex() << "\n"
              << "  d = " << kp.d.to_hex() << "\n"
              << "  increments applied to e: " << generated.e_increments << "\n"
              << "keypair valid: " << (valid ? "yes" : "no") << "\n";
    if (hit)
      std::cout << "recovery: factored n at i=" << generated.e_increments
                << ", p = " << recovered->first.to_hex() << ", q = " << recovered->second.to_hex()
                << "\n";
    else
      std::cout << "recovery: NOT RECOVERED\n";
  }

  if (!args.export_path.empty()) {
    const std::vector<uint8_t> bits = export_constant_bits(adv_pub, adv_bits);
    write_file(args.export_path, format_bits(bits) + "\n");
    std::cout << "constant export: " << args.export_path << " (" << bits.size() << " bits)\n";
  }
  return hit && valid ? kExitOk : kExitInternal;
}

struct KleptoRecoverArgs {
  std::string n_hex, e_hex, nadv_hex, eadv_hex, dadv_hex;
  uint64_t i_max = 64;
};

int run_klepto_recover(const KleptoRecoverArgs& args, bool json_output) {
  const BigUint n = BigUint::from_hex(args.n_hex);
  const BigUint e = BigUint::from_hex(args.e_hex);
  const AdversaryKey adv{BigUint::from_hex(args.nadv_hex), BigUint::from_hex(args.eadv_hex),
                         BigUint::from_hex(args.dadv_hex)};
  const auto recovered = attacker_recover(n, e, adv, args.i_max);
  if (json_output) {
    json j{{"recovered", recovered.has_value()}};
    if (recovered) {
      j["p"] = recovered->first.to_hex();
      j["q"] = recovered->second.to_hex();
    }
    std::cout << j.dump(2) << "\n";
  } else if (recovered) {
    std::cout << "recovered: p = " << recovered->first.to_hex()
              << ", q = " << recovered->second.to_hex() << "\n";
  } else {
    std::cout << "NOT RECOVERED\n";
  }
  return kExitOk;
}

struct WmArgs {
  std::string netlist_path, spec_path, payload, out_path, pred_path;
  bool crc = false;
};

int run_wm_embed(const WmArgs& args) {
  const LutNetlist netlist = parse_lut_netlist_file(args.netlist_path);
  WatermarkSpec spec = parse_watermark_spec_file(args.spec_path);
  spec.payload = payload_from_string(args.payload);
  if (args.crc)
    spec.payload = crc8_prefix(spec.payload);
  const uint64_t capacity = watermark_capacity(netlist, spec);
  if (spec.payload.size() < capacity) {
    // pad to capacity; extraction reports the whole field
    spec.payload.resize(capacity, 0);
    std::cout << "payload padded to capacity (" << capacity << " bits)\n";
  }
  emit_lut_netlist_file(embed(netlist, spec), args.out_path);
  std::cout << "embedded " << spec.payload.size() << " bits into " << args.out_path << "\n";
  return kExitOk;
}

int run_wm_extract(const WmArgs& args, bool json_output) {
  const LutNetlist netlist = parse_lut_netlist_file(args.netlist_path);
  const WatermarkSpec spec = parse_watermark_spec_file(args.spec_path);
  std::vector<uint8_t> payload = extract(netlist, spec);
  bool crc_ok = true;
  if (args.crc) {
    std::vector<uint8_t> inner;
    crc_ok = crc8_check(payload, inner);
    if (crc_ok)
      payload = std::move(inner);
  }
  if (json_output) {
    json j{{"payload", payload_to_string(payload)}};
    if (args.crc)
      j["crc_ok"] = crc_ok;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "payload: " << payload_to_string(payload) << "\n";
    if (args.crc)
      std::cout << "crc: " << (crc_ok ? "ok" : "MISMATCH") << "\n";
  }
  return crc_ok ? kExitOk : kExitInternal;
}

int run_wm_attack(const WmArgs& args, bool json_output) {
  const LutNetlist netlist = parse_lut_netlist_file(args.netlist_path);
  const std::vector<uint32_t> suspects = gnd_trace_attack(netlist);
  if (json_output) {
    std::cout << json(suspects).dump() << "\n";
  } else {
    std::cout << "gnd-driven luts:";
    for (uint32_t id : suspects)
      std::cout << " " << id;
    std::cout << "\n";
  }
  return kExitOk;
}

int run_wm_harden(const WmArgs& args) {
  const LutNetlist netlist = parse_lut_netlist_file(args.netlist_path);
  const WatermarkSpec spec = parse_watermark_spec_file(args.spec_path);
  const ParsedNetlist parsed = parse_netlist_file(args.pred_path);
  if (!parsed.wiring)
    throw std::runtime_error("predicate netlist has no wiring section");
  const Trajectory traj = simulate_until_stable(parsed.system);
  if (traj.terminal != TerminalKind::Fixpoint)
    throw infeasible_error("predicate never stabilizes");
  OpaquePredicate pred{parsed.system, traj.stable_state, traj.delay, Generator::Qm,
                       count_gates(parsed.system.logic)};
  emit_lut_netlist_file(harden(netlist, spec, pred, *parsed.wiring), args.out_path);
  std::cout << "hardened netlist written to " << args.out_path << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"opforge — synthesize, simulate and emit hardware opaque predicates"};
  app.require_subcommand(1);
  app.fallthrough(); // --json may follow the subcommand
  bool json_output = false;
  app.add_flag("--json", json_output, "machine-readable output");

  GenArgs gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate one opaque predicate");
  cmd_gen->add_option("--algo", gen.algo, "generator")
      ->required()
      ->check(CLI::IsMember({"qm", "qmx", "rnd"}));
  cmd_gen->add_option("--n", gen.n, "register width")->required();
  cmd_gen->add_option("--t", gen.t, "stabilization delay (minimum for rnd)")->required();
  cmd_gen->add_option("--s", gen.reset_hex, "reset state, hex");
  cmd_gen->add_option("--seed", gen.seed, "rng seed (printed when generated)");
  auto* emit_opt = cmd_gen->add_option("--emit", gen.emit, "also write a file")
                       ->check(CLI::IsMember({"verilog", "netlist"}));
  auto* out_opt = cmd_gen->add_option("--out", gen.out_path, "output path for --emit");
  emit_opt->needs(out_opt);
  cmd_gen->add_option("--module", gen.module_name, "verilog module name");
  cmd_gen->add_option("--constant", gen.constant,
                      "also plan fanout wiring onto this constant (bits, msb first)");
  cmd_gen->add_option("--budget", gen.budget, "rnd attempt budget");
  cmd_gen->add_flag("--t-min", gen.t_is_min, "treat --t as a lower bound for qm/qmx too");

  EncodeArgs encode_args;
  CLI::App* cmd_encode = app.add_subcommand("encode", "strategy-1 state encoding + wiring plan");
  cmd_encode->add_option("--states", encode_args.states_path, "states file")->required();
  cmd_encode->add_option("--subset", encode_args.subset_csv, "comma-separated subset S")
      ->required();
  cmd_encode->add_option("--constant", encode_args.constant, "constant bits, msb first")
      ->required();
  cmd_encode->add_option("--n", encode_args.n, "register width")->required();
  cmd_encode->add_option("--seed", encode_args.seed, "rng seed");
  cmd_encode->add_flag("--allow-invert", encode_args.allow_invert,
                       "permit inverter taps when no position holds a needed value");

  TableArgs table_args;
  CLI::App* cmd_table = app.add_subcommand("table", "gate-count comparison grid");
  cmd_table->add_option("--trials", table_args.trials, "trials per cell")
      ->check(CLI::PositiveNumber);
  cmd_table->add_option("--seed", table_args.seed, "master seed");
  cmd_table->add_option("--out", table_args.out_path, "write report to file");
  cmd_table->add_option("--format", table_args.format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));
  cmd_table->add_option("--n-values", table_args.n_values, "override n grid");
  cmd_table->add_option("--t-values", table_args.t_values, "override t grid");

  CLI::App* cmd_klepto = app.add_subcommand("klepto", "subverted RSA keygen case study");
  cmd_klepto->require_subcommand(1);
  KleptoDemoArgs demo_args;
  CLI::App* cmd_demo = cmd_klepto->add_subcommand("demo", "generate, verify and recover");
  cmd_demo->add_option("--lambda", demo_args.lambda, "modulus bits")
      ->check(CLI::Range(32u, 2048u));
  cmd_demo->add_option("--adv-bits", demo_args.adv_bits, "adversary modulus bits");
  cmd_demo->add_option("--imax", demo_args.i_max, "recovery attempts");
  cmd_demo->add_option("--seed", demo_args.seed, "rng seed");
  cmd_demo->add_option("--export", demo_args.export_path, "write embedded-constant bit file");

  KleptoRecoverArgs recover_args;
  CLI::App* cmd_recover = cmd_klepto->add_subcommand("recover", "attacker-side factorization");
  cmd_recover->add_option("--n", recover_args.n_hex, "public modulus, hex")->required();
  cmd_recover->add_option("--e", recover_args.e_hex, "public exponent, hex")->required();
  cmd_recover->add_option("--nadv", recover_args.nadv_hex, "adversary modulus, hex")->required();
  cmd_recover->add_option("--eadv", recover_args.eadv_hex, "adversary exponent, hex")->required();
  cmd_recover->add_option("--dadv", recover_args.dadv_hex, "adversary private exponent, hex")
      ->required();
  cmd_recover->add_option("--imax", recover_args.i_max, "recovery attempts");

  CLI::App* cmd_wm = app.add_subcommand("wm", "LUT watermark workflows");
  cmd_wm->require_subcommand(1);
  WmArgs wm_embed_args, wm_extract_args, wm_attack_args, wm_harden_args;
  CLI::App* cmd_embed = cmd_wm->add_subcommand("embed", "embed a payload");
  cmd_embed->add_option("--netlist", wm_embed_args.netlist_path)->required();
  cmd_embed->add_option("--spec", wm_embed_args.spec_path)->required();
  cmd_embed->add_option("--payload", wm_embed_args.payload)->required();
  cmd_embed->add_option("--out", wm_embed_args.out_path)->required();
  cmd_embed->add_flag("--crc", wm_embed_args.crc, "prepend a CRC-8");

  CLI::App* cmd_extract = cmd_wm->add_subcommand("extract", "read a payload back");
  cmd_extract->add_option("--netlist", wm_extract_args.netlist_path)->required();
  cmd_extract->add_option("--spec", wm_extract_args.spec_path)->required();
  cmd_extract->add_flag("--crc", wm_extract_args.crc, "verify and strip a CRC-8");

  CLI::App* cmd_attack = cmd_wm->add_subcommand("attack", "GND-trace removal attack");
  cmd_attack->add_option("--netlist", wm_attack_args.netlist_path)->required();

  CLI::App* cmd_harden =
      cmd_wm->add_subcommand("harden", "re-drive fixed inputs from a predicate");
  cmd_harden->add_option("--netlist", wm_harden_args.netlist_path)->required();
  cmd_harden->add_option("--spec", wm_harden_args.spec_path)->required();
  cmd_harden->add_option("--pred", wm_harden_args.pred_path, "predicate netlist with wiring")
      ->required();
  cmd_harden->add_option("--out", wm_harden_args.out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_gen->parsed())
      return run_gen(gen, json_output);
    if (cmd_encode->parsed())
      return run_encode(encode_args);
    if (cmd_table->parsed())
      return run_table_cmd(table_args);
    if (cmd_klepto->parsed()) {
      if (cmd_demo->parsed()) {
        if (demo_args.lambda % 2 != 0)
          throw std::invalid_argument("--lambda must be even");
        return run_klepto_demo(demo_args, json_output);
      }
      if (cmd_recover->parsed())
        return run_klepto_recover(recover_args, json_output);
    }
    if (cmd_wm->parsed()) {
      if (cmd_embed->parsed())
        return run_wm_embed(wm_embed_args);
      if (cmd_extract->parsed())
        return run_wm_extract(wm_extract_args, json_output);
      if (cmd_attack->parsed())
        return run_wm_attack(wm_attack_args, json_output);
      if (cmd_harden->parsed())
        return run_wm_harden(wm_harden_args);
    }
    return kExitUsage;
  } catch (const infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const budget_exhausted_error& e) {
    std::cerr << "budget exhausted after " << e.attempts() << " attempts: " << e.what() << "\n";
    return kExitBudget;
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
