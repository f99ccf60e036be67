#pragma once

#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "osdf/bench.hpp"
#include "osdf/controller.hpp"
#include "osdf/topology_io.hpp"

namespace osdf {

namespace detail {

// whitespace split honoring double quotes
inline std::vector<std::string> tokenize_command(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool in_quote = false, have = false;
  for (char c : line) {
    if (c == '"') {
      in_quote = !in_quote;
      have = true;
      continue;
    }
    if (!in_quote && (c == ' ' || c == '\t')) {
      if (have) out.push_back(cur);
      cur.clear();
      have = false;
      continue;
    }
    cur += c;
    have = true;
  }
  if (in_quote) throw ParseError("unterminated quote in command");
  if (have) out.push_back(cur);
  return out;
}

}  // namespace detail

/// One interactive/scripted controller session: topology, profiles, policies,
/// a simulated network and the last injection trace.
class Session {
 public:
  explicit Session(std::ostream& out) : out_(out) {}

  /// Execute one command line; returns false on error (message printed).
  bool execute(const std::string& line) {
    try {
      return dispatch(detail::tokenize_command(line));
    } catch (const std::exception& e) {
      out_ << "error: " << e.what() << "\n";
      return false;
    }
  }

  bool run_script(std::istream& in, bool stop_on_error) {
    bool ok = true;
    for (std::string line; std::getline(in, line);) {
      if (line.empty() || line[0] == '#') continue;
      if (!execute(line)) {
        ok = false;
        if (stop_on_error) return false;
      }
    }
    return ok;
  }

  const SimNetwork* network() const { return net_.get(); }
  const Trace* last_trace() const { return have_trace_ ? &last_trace_ : nullptr; }

 private:
  bool dispatch(const std::vector<std::string>& args) {
    if (args.empty()) return true;
    const std::string& cmd = args[0];
    if (cmd == "topo") return cmd_topo(args);
    if (cmd == "policy") return cmd_policy(args);
    if (cmd == "profile") return cmd_profile(args);
    if (cmd == "mode") return cmd_mode(args);
    if (cmd == "inject") return cmd_inject(args);
    if (cmd == "stats") return cmd_stats();
    if (cmd == "trace") return cmd_trace(args);
    if (cmd == "bench") return cmd_bench(args);
    out_ << usage();
    return false;
  }

  static std::string usage() {
    return "commands:\n"
           "  topo load <file> | topo linear <n> | topo three-region\n"
           "  policy add \"<line>\" | policy list | policy remove <id>\n"
           "  profile add \"<line>\"\n"
           "  mode <osdf|reactive>\n"
           "  inject --src <host> --dst <host> --app <profile> [--dport <p>]\n"
           "  stats | trace dump <file>\n"
           "  bench --mode <osdf|reactive|both> [--min-len 2] --max-len <n>"
           " --trials <t> [--out <csv>] [--wall]\n";
  }

  void reset_network() {
    if (!topo_) return;
    net_ = std::make_unique<SimNetwork>(*topo_, costs_);
    ctrl_ = std::make_unique<Controller>(mode_, store_, profiles_, algorithms_);
    ctrl_->attach(*net_);
    have_trace_ = false;
  }

  bool cmd_topo(const std::vector<std::string>& args) {
    if (args.size() == 3 && args[1] == "load") {
      std::ifstream in(args[2]);
      if (!in) {
        out_ << "error: cannot open '" << args[2] << "'\n";
        return false;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      topo_ = parse_topology(buf.str());
    } else if (args.size() == 3 && args[1] == "linear") {
      topo_ = gen_linear(std::stoi(args[2]));
    } else if (args.size() == 2 && args[1] == "three-region") {
      topo_ = gen_three_region();
    } else {
      out_ << usage();
      return false;
    }
    reset_network();
    out_ << "topology loaded: " << topo_->devices().size() << " devices, "
         << topo_->hosts().size() << " hosts, " << topo_->regions().size() << " regions\n";
    return true;
  }

  bool cmd_policy(const std::vector<std::string>& args) {
    if (args.size() == 3 && args[1] == "add") {
      if (!topo_) {
        out_ << "error: no topology loaded\n";
        return false;
      }
      int id = store_.add(parse_policy(args[2]), *topo_, profiles_);
      out_ << "policy " << id << " added\n";
      return true;
    }
    if (args.size() == 2 && args[1] == "list") {
      for (const Policy& p : store_.list())
        out_ << p.id << ": " << format_policy(p) << "\n";
      return true;
    }
    if (args.size() == 3 && args[1] == "remove") {
      int id = std::stoi(args[2]);
      Policy removed = store_.remove(id);
      size_t purged = (ctrl_ && net_) ? ctrl_->purge_policy_rules(*net_, id) : 0;
      out_ << "policy " << id << " removed, " << purged << " rules purged\n";
      return true;
    }
    out_ << usage();
    return false;
  }

  bool cmd_profile(const std::vector<std::string>& args) {
    if (args.size() == 3 && args[1] == "add") {
      TrafficProfile p = parse_profile_line(args[2]);
      profiles_.add(p);
      out_ << "profile " << p.name << " added\n";
      return true;
    }
    out_ << usage();
    return false;
  }

  bool cmd_mode(const std::vector<std::string>& args) {
    if (args.size() != 2 || (args[1] != "osdf" && args[1] != "reactive")) {
      out_ << usage();
      return false;
    }
    mode_ = args[1] == "osdf" ? ControllerMode::Osdf : ControllerMode::ReactiveBaseline;
    reset_network();  // mode is fixed per run; switching starts a fresh one
    out_ << "mode " << args[1] << "\n";
    return true;
  }

  bool cmd_inject(const std::vector<std::string>& args) {
    if (!net_) {
      out_ << "error: no topology loaded\n";
      return false;
    }
    std::string src, dst, app;
    std::optional<uint16_t> dport;
    for (size_t i = 1; i + 1 < args.size(); i += 2) {
      if (args[i] == "--src") src = args[i + 1];
      else if (args[i] == "--dst") dst = args[i + 1];
      else if (args[i] == "--app") app = args[i + 1];
      else if (args[i] == "--dport") dport = static_cast<uint16_t>(std::stoi(args[i + 1]));
      else {
        out_ << "error: unknown flag '" << args[i] << "'\n";
        return false;
      }
    }
    if (src.empty() || dst.empty() || app.empty()) {
      out_ << "error: inject needs --src, --dst and --app\n";
      return false;
    }
    const Host* sh = topo_->find_host(src);
    const Host* dh = topo_->find_host(dst);
    if (!sh || !dh) {
      out_ << "error: unknown host '" << (sh ? dst : src) << "'\n";
      return false;
    }
    Packet pkt = craft_packet(profiles_.get(app), *sh, *dh, dport);
    size_t outcomes_before = ctrl_->outcomes().size();
    last_trace_ = net_->inject_packet(src, pkt);
    have_trace_ = true;
    if (ctrl_->outcomes().size() > outcomes_before) {
      const SetupOutcome& o = ctrl_->outcomes()[outcomes_before];
      out_ << o.to_string(last_trace_.packet_in_count, last_trace_.response_time_us) << "\n";
    }
    out_ << (last_trace_.delivered ? "DELIVERED " : "DROPPED ") << last_trace_.terminal << "\n";
    return true;
  }

  static Packet craft_packet(const TrafficProfile& profile, const Host& src, const Host& dst,
                             std::optional<uint16_t> dport) {
    Packet pkt;
    pkt.src_mac = src.mac;
    pkt.dst_mac = dst.mac;
    pkt.src_ip = src.ip;
    pkt.dst_ip = dst.ip;
    if (profile.proto) {
      pkt.ip_proto = *profile.proto;
    } else {
      pkt.ip_proto = IpProto::Udp;  // unconstrained profile: plain UDP datagram
    }
    if (pkt.has_ports()) {
      pkt.l4_src = 40000;
      if (dport) {
        pkt.l4_dst = *dport;
      } else if (!profile.dst_ports.empty()) {
        pkt.l4_dst = profile.dst_ports.ranges.front().first;
      } else {
        pkt.l4_dst = 53;
      }
    }
    return pkt;
  }

  bool cmd_stats() {
    if (!have_trace_) {
      out_ << "no traffic injected yet\n";
      return true;
    }
    out_ << "packet_ins=" << last_trace_.packet_in_count
         << " rules=" << last_trace_.rules_installed
         << " response_t_us=" << last_trace_.response_time_us << " outcome="
         << (last_trace_.delivered ? "delivered " : "dropped ") << last_trace_.terminal << "\n";
    return true;
  }

  bool cmd_trace(const std::vector<std::string>& args) {
    if (args.size() != 3 || args[1] != "dump") {
      out_ << usage();
      return false;
    }
    if (!have_trace_) {
      out_ << "error: no trace to dump\n";
      return false;
    }
    std::ofstream f(args[2]);
    if (!f) {
      out_ << "error: cannot write '" << args[2] << "'\n";
      return false;
    }
    f << last_trace_.dump();
    out_ << "trace written to " << args[2] << "\n";
    return true;
  }

  bool cmd_bench(const std::vector<std::string>& args) {
    std::string mode = "both", out_file;
    int min_len = 2, max_len = 0, trials = 1;
    bool wall = false;
    for (size_t i = 1; i < args.size(); ++i) {
      if (args[i] == "--wall") {
        wall = true;
      } else if (i + 1 < args.size()) {
        if (args[i] == "--mode") mode = args[++i];
        else if (args[i] == "--min-len") min_len = std::stoi(args[++i]);
        else if (args[i] == "--max-len") max_len = std::stoi(args[++i]);
        else if (args[i] == "--trials") trials = std::stoi(args[++i]);
        else if (args[i] == "--out") out_file = args[++i];
        else {
          out_ << "error: unknown flag '" << args[i] << "'\n";
          return false;
        }
      } else {
        out_ << "error: flag '" << args[i] << "' needs a value\n";
        return false;
      }
    }
    if (max_len < 1) {
      out_ << "error: bench needs --max-len\n";
      return false;
    }
    std::vector<BenchRow> rows;
    if (mode == "osdf" || mode == "both") {
      auto r = bench_response_time(ControllerMode::Osdf, min_len, max_len, trials, costs_);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    if (mode == "reactive" || mode == "both") {
      auto r = bench_response_time(ControllerMode::ReactiveBaseline, min_len, max_len, trials,
                                   costs_);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    if (rows.empty()) {
      out_ << "error: unknown mode '" << mode << "'\n";
      return false;
    }
    std::string csv = bench_csv(rows, wall);
    if (out_file.empty()) {
      out_ << csv;
    } else {
      std::ofstream f(out_file);
      if (!f) {
        out_ << "error: cannot write '" << out_file << "'\n";
        return false;
      }
      f << csv;
      out_ << rows.size() << " rows written to " << out_file << "\n";
    }
    return true;
  }

  std::ostream& out_;
  std::optional<Topology> topo_;
  ProfileRegistry profiles_;
  AlgorithmRegistry algorithms_;
  PolicyStore store_;
  CostConfig costs_;
  ControllerMode mode_ = ControllerMode::Osdf;
  std::unique_ptr<SimNetwork> net_;
  std::unique_ptr<Controller> ctrl_;
  Trace last_trace_;
  bool have_trace_ = false;
};

}  // namespace osdf
