#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "osdf/controller.hpp"

namespace osdf {

struct BenchRow {
  int n = 0;
  ControllerMode mode = ControllerMode::Osdf;
  int64_t response_time_us = 0;  // mean over trials (exact in virtual time)
  int packet_in_count = 0;
  int trials = 0;
  int64_t wall_us = 0;  // host-dependent, excluded from the CSV by default
};

inline Packet bench_packet(const Topology& t) {
  const Host& h1 = *t.find_host("h1");
  const Host& h2 = *t.find_host("h2");
  Packet pkt;
  pkt.src_mac = h1.mac;
  pkt.dst_mac = h2.mac;
  pkt.src_ip = h1.ip;
  pkt.dst_ip = h2.ip;
  pkt.ip_proto = IpProto::Udp;
  pkt.l4_src = 40000;
  pkt.l4_dst = 53;  // classifies as "any"
  return pkt;
}

/// First-packet flow setup cost on gen_linear(n) for each n in [n_min, n_max].
/// Every trial runs on a fresh network and controller.
inline std::vector<BenchRow> bench_response_time(ControllerMode mode, int n_min, int n_max,
                                                 int trials, CostConfig costs = {}) {
  if (n_min < 1 || n_max < n_min) throw ValidationError("invalid benchmark length range");
  if (trials < 1) throw ValidationError("benchmark needs at least one trial");
  std::vector<BenchRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    BenchRow row{n, mode, 0, 0, trials};
    int64_t total = 0;
    auto wall_start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < trials; ++trial) {
      Topology topo = gen_linear(n);
      ProfileRegistry profiles;
      AlgorithmRegistry algorithms;
      PolicyStore store;
      if (mode == ControllerMode::Osdf)
        store.add(parse_policy("intra any region R"), topo, profiles);
      SimNetwork net(topo, costs);
      Controller ctrl(mode, store, profiles, algorithms);
      ctrl.attach(net);
      Trace trace = net.inject_packet("h1", bench_packet(net.topology()));
      total += trace.response_time_us;
      row.packet_in_count = trace.packet_in_count;
    }
    auto wall_end = std::chrono::steady_clock::now();
    row.response_time_us = total / trials;
    row.wall_us =
        std::chrono::duration_cast<std::chrono::microseconds>(wall_end - wall_start).count();
    rows.push_back(row);
  }
  return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows, bool wall_clock = false) {
  std::string out = "n,mode,response_time_us,packet_in_count,trials";
  if (wall_clock) out += ",wall_us";
  out += "\n";
  for (const BenchRow& r : rows) {
    out += std::to_string(r.n) + "," + mode_name(r.mode) + "," +
           std::to_string(r.response_time_us) + "," + std::to_string(r.packet_in_count) + "," +
           std::to_string(r.trials);
    if (wall_clock) out += "," + std::to_string(r.wall_us);
    out += "\n";
  }
  return out;
}

}  // namespace osdf
