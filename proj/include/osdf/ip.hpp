#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace osdf {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoPathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Ipv4 {
  uint32_t value = 0;
  auto operator<=>(const Ipv4&) const = default;
};

struct Mac {
  uint64_t value = 0;
  auto operator<=>(const Mac&) const = default;
};

inline Ipv4 parse_ipv4(const std::string& s) {
  uint32_t out = 0;
  int octets = 0;
  size_t i = 0;
  while (i < s.size()) {
    if (octets == 4) throw ParseError("bad IPv4 address '" + s + "'");
    size_t j = i;
    uint32_t v = 0;
    while (j < s.size() && s[j] >= '0' && s[j] <= '9') {
      v = v * 10 + static_cast<uint32_t>(s[j] - '0');
      if (v > 255) throw ParseError("bad IPv4 octet in '" + s + "'");
      ++j;
    }
    if (j == i) throw ParseError("bad IPv4 address '" + s + "'");
    out = (out << 8) | v;
    ++octets;
    if (j < s.size()) {
      if (s[j] != '.') throw ParseError("bad IPv4 address '" + s + "'");
      ++j;
      if (j == s.size()) throw ParseError("bad IPv4 address '" + s + "'");
    }
    i = j;
  }
  if (octets != 4) throw ParseError("bad IPv4 address '" + s + "'");
  return Ipv4{out};
}

inline std::string format_ipv4(Ipv4 ip) {
  std::string out;
  for (int shift = 24; shift >= 0; shift -= 8) {
    if (!out.empty()) out += '.';
    out += std::to_string((ip.value >> shift) & 0xffu);
  }
  return out;
}

inline Mac parse_mac(const std::string& s) {
  uint64_t out = 0;
  int bytes = 0;
  size_t i = 0;
  auto hex = [&](char c) -> uint64_t {
    if (c >= '0' && c <= '9') return static_cast<uint64_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<uint64_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<uint64_t>(c - 'A' + 10);
    throw ParseError("bad MAC address '" + s + "'");
  };
  while (bytes < 6) {
    if (i + 2 > s.size()) throw ParseError("bad MAC address '" + s + "'");
    out = (out << 8) | (hex(s[i]) << 4 | hex(s[i + 1]));
    i += 2;
    ++bytes;
    if (bytes < 6) {
      if (i >= s.size() || s[i] != ':') throw ParseError("bad MAC address '" + s + "'");
      ++i;
    }
  }
  if (i != s.size()) throw ParseError("bad MAC address '" + s + "'");
  return Mac{out};
}

inline std::string format_mac(Mac mac) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (int shift = 40; shift >= 0; shift -= 8) {
    if (!out.empty()) out += ':';
    uint8_t b = (mac.value >> shift) & 0xffu;
    out += digits[b >> 4];
    out += digits[b & 0xf];
  }
  return out;
}

/// IPv4 prefix in CIDR notation. The network address is kept as written;
/// membership masks it on the fly.
struct Cidr {
  Ipv4 network;
  int length = 0;

  uint32_t mask() const {
    return length == 0 ? 0u : ~uint32_t{0} << (32 - length);
  }
  bool contains(Ipv4 ip) const {
    return (ip.value & mask()) == (network.value & mask());
  }
  bool overlaps(const Cidr& other) const {
    uint32_t m = length < other.length ? mask() : other.mask();
    return (network.value & m) == (other.network.value & m);
  }
  auto operator<=>(const Cidr&) const = default;
};

inline Cidr parse_cidr(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) throw ParseError("bad CIDR '" + s + "'");
  Cidr c;
  c.network = parse_ipv4(s.substr(0, slash));
  const std::string len = s.substr(slash + 1);
  if (len.empty() || len.size() > 2) throw ParseError("bad CIDR length in '" + s + "'");
  int v = 0;
  for (char ch : len) {
    if (ch < '0' || ch > '9') throw ParseError("bad CIDR length in '" + s + "'");
    v = v * 10 + (ch - '0');
  }
  if (v > 32) throw ParseError("bad CIDR length in '" + s + "'");
  c.length = v;
  return c;
}

inline std::string format_cidr(const Cidr& c) {
  return format_ipv4(c.network) + "/" + std::to_string(c.length);
}

}  // namespace osdf
