#pragma once

// Simulated login sessions, the hex trace format and the framed handshake
// capture format.
//
// Trace format: one record per line, 16 lowercase hex digits of challenge
// bytes, a space, 16 lowercase hex digits of response bytes. Lines starting
// with '#' and blank lines are ignored.
//
// Capture format: a stream of packets, each a 3-byte little-endian payload
// length, a 1-byte sequence number and the payload. A session is a greeting
// (seq 0) followed by an auth packet (seq 1):
//   greeting: u8 protocol version (10), server version + NUL,
//             u32le thread id, 8 challenge bytes + NUL
//   auth:     u16le client flags, u24le max packet size, user name + NUL,
//             8 response bytes + NUL
// Trailing payload bytes after these fields are ignored on parse.

#include "oldauth/attack.hpp"
#include "oldauth/legacy_auth.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace oldauth {

struct TraceRecord {
  std::array<std::uint8_t, 8> challenge{};
  std::array<std::uint8_t, 8> response{};

  std::string challenge_text() const { return {challenge.begin(), challenge.end()}; }
  ChallengeResponsePair to_pair() const;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

// One simulated login: challenge drawn from `rng`, response computed from
// the password hash.
TraceRecord make_session(HashHalves password_hash, std::mt19937_64& rng,
                         const ScrambleParams& params = {});

TraceRecord generate_session(std::string_view password, std::uint64_t rng_seed,
                             const ScrambleParams& params = {});

// `count` sessions from a single generator seeded with `rng_seed`; the first
// record equals generate_session(password, rng_seed).
std::vector<TraceRecord> generate_sessions(std::string_view password, std::size_t count,
                                           std::uint64_t rng_seed,
                                           const ScrambleParams& params = {});

void write_trace(std::ostream& out, std::span<const TraceRecord> records);
std::vector<TraceRecord> read_trace(std::istream& in);
std::string format_trace(std::span<const TraceRecord> records);
std::vector<TraceRecord> parse_trace(std::string_view text);

struct CaptureSession {
  std::string username;
  TraceRecord record;

  friend bool operator==(const CaptureSession&, const CaptureSession&) = default;
};

std::vector<std::uint8_t> emit_capture(std::span<const TraceRecord> records,
                                       std::span<const std::string> usernames);
std::vector<CaptureSession> parse_capture(std::span<const std::uint8_t> capture);

}  // namespace oldauth
