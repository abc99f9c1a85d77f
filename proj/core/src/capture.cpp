#include "oldauth/capture.hpp"

#include "oldauth/error.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace oldauth {

namespace {

constexpr std::uint8_t protocol_version = 10;
constexpr char server_version[] = "3.22.32-log";
constexpr std::uint16_t client_flags = 0x0005;
constexpr std::uint32_t max_packet = 0xffffff;

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::array<std::uint8_t, 8> parse_hex8(std::string_view field, std::size_t line,
                                       const char* what) {
  if (field.size() % 2 != 0) {
    throw ParseError(ParseError::Unit::line, line, std::string("odd-length hex in ") + what);
  }
  if (field.size() != 16) {
    throw ParseError(ParseError::Unit::line, line,
                     std::string(what) + " must be 16 hex digits, got " +
                         std::to_string(field.size()));
  }
  std::array<std::uint8_t, 8> out{};
  for (std::size_t i = 0; i < 8; ++i) {
    const int hi = hex_value(field[2 * i]);
    const int lo = hex_value(field[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw ParseError(ParseError::Unit::line, line, std::string("bad hex digit in ") + what);
    }
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

bool response_byte_ok(std::uint8_t b) { return b >= 64 && b < 96; }

void put_packet(std::vector<std::uint8_t>& out, std::uint8_t seq,
                const std::vector<std::uint8_t>& payload) {
  const auto len = static_cast<std::uint32_t>(payload.size());
  out.push_back(static_cast<std::uint8_t>(len));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len >> 16));
  out.push_back(seq);
  out.insert(out.end(), payload.begin(), payload.end());
}

class PacketReader {
 public:
  explicit PacketReader(std::span<const std::uint8_t> data) : data_(data) {}

  bool done() const { return pos_ == data_.size(); }

  struct Packet {
    std::size_t offset;  // of the payload
    std::uint8_t seq;
    std::span<const std::uint8_t> payload;
  };

  Packet next(const char* what) {
    if (data_.size() - pos_ < 4) {
      throw ParseError(ParseError::Unit::byte_offset, pos_,
                       std::string("truncated header of ") + what + " packet");
    }
    const std::size_t len = data_[pos_] | data_[pos_ + 1] << 8 | data_[pos_ + 2] << 16;
    const std::uint8_t seq = data_[pos_ + 3];
    if (data_.size() - pos_ - 4 < len) {
      throw ParseError(ParseError::Unit::byte_offset, pos_,
                       std::string("truncated ") + what + " packet: header announces " +
                           std::to_string(len) + " payload bytes, " +
                           std::to_string(data_.size() - pos_ - 4) + " present");
    }
    Packet p{pos_ + 4, seq, data_.subspan(pos_ + 4, len)};
    pos_ += 4 + len;
    return p;
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

// Cursor over one payload; errors report absolute capture offsets.
class FieldReader {
 public:
  FieldReader(const PacketReader::Packet& packet, const char* what)
      : payload_(packet.payload), base_(packet.offset), what_(what) {}

  std::size_t offset() const { return base_ + pos_; }

  std::span<const std::uint8_t> bytes(std::size_t n, const char* field) {
    if (payload_.size() - pos_ < n) {
      throw ParseError(ParseError::Unit::byte_offset, offset(),
                       std::string(what_) + " packet too short for " + field);
    }
    auto out = payload_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint32_t uint_le(std::size_t n, const char* field) {
    auto b = bytes(n, field);
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }

  std::string c_string(const char* field) {
    const auto rest = payload_.subspan(pos_);
    const auto nul = std::find(rest.begin(), rest.end(), std::uint8_t{0});
    if (nul == rest.end()) {
      throw ParseError(ParseError::Unit::byte_offset, offset(),
                       std::string("missing NUL after ") + field + " in " + what_ + " packet");
    }
    std::string s(rest.begin(), nul);
    pos_ += s.size() + 1;
    return s;
  }

  void nul(const char* field) {
    const std::size_t at = offset();
    auto b = bytes(1, field);
    if (b[0] != 0) {
      throw ParseError(ParseError::Unit::byte_offset, at,
                       std::string("missing NUL after ") + field + " in " + what_ + " packet");
    }
  }

 private:
  std::span<const std::uint8_t> payload_;
  std::size_t base_;
  std::size_t pos_ = 0;
  const char* what_;
};

}  // namespace

ChallengeResponsePair TraceRecord::to_pair() const {
  return ChallengeResponsePair::from_text(challenge_text(),
                                          Response{{response.begin(), response.end()}});
}

TraceRecord make_session(HashHalves password_hash, std::mt19937_64& rng,
                         const ScrambleParams& params) {
  if (params.rounds != 8) throw MalformedInput("trace records carry exactly 8 response bytes");
  TraceRecord rec;
  const std::string text = random_challenge(rng, rec.challenge.size());
  std::copy(text.begin(), text.end(), rec.challenge.begin());
  const Response r = scramble(password_hash, hash_password(text), params);
  std::copy(r.bytes.begin(), r.bytes.end(), rec.response.begin());
  return rec;
}

TraceRecord generate_session(std::string_view password, std::uint64_t rng_seed,
                             const ScrambleParams& params) {
  std::mt19937_64 rng(rng_seed);
  return make_session(hash_password(password), rng, params);
}

std::vector<TraceRecord> generate_sessions(std::string_view password, std::size_t count,
                                           std::uint64_t rng_seed, const ScrambleParams& params) {
  std::mt19937_64 rng(rng_seed);
  const HashHalves hash = hash_password(password);
  std::vector<TraceRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(make_session(hash, rng, params));
  return out;
}

void write_trace(std::ostream& out, std::span<const TraceRecord> records) {
  for (const auto& rec : records) {
    out << Response{{rec.challenge.begin(), rec.challenge.end()}}.hex() << ' '
        << Response{{rec.response.begin(), rec.response.end()}}.hex() << '\n';
  }
}

std::vector<TraceRecord> read_trace(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto space = line.find(' ');
    if (space == std::string::npos || line.find(' ', space + 1) != std::string::npos) {
      throw ParseError(ParseError::Unit::line, number,
                       "expected '<challenge hex> <response hex>'");
    }
    const std::string_view view(line);
    TraceRecord rec;
    rec.challenge = parse_hex8(view.substr(0, space), number, "challenge");
    rec.response = parse_hex8(view.substr(space + 1), number, "response");
    if (!std::all_of(rec.response.begin(), rec.response.end(), response_byte_ok)) {
      throw ParseError(ParseError::Unit::line, number, "response byte outside [0x40, 0x60)");
    }
    out.push_back(rec);
  }
  return out;
}

std::string format_trace(std::span<const TraceRecord> records) {
  std::ostringstream os;
  write_trace(os, records);
  return os.str();
}

std::vector<TraceRecord> parse_trace(std::string_view text) {
  std::istringstream is{std::string(text)};
  return read_trace(is);
}

std::vector<std::uint8_t> emit_capture(std::span<const TraceRecord> records,
                                       std::span<const std::string> usernames) {
  if (records.size() != usernames.size()) {
    throw MalformedInput("emit_capture needs one user name per record");
  }
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const auto& user = usernames[i];
    if (user.find('\0') != std::string::npos) throw MalformedInput("user name contains NUL");
    if (std::find(rec.challenge.begin(), rec.challenge.end(), 0) != rec.challenge.end()) {
      throw MalformedInput("challenge contains NUL");
    }

    std::vector<std::uint8_t> greeting;
    greeting.push_back(protocol_version);
    greeting.insert(greeting.end(), std::begin(server_version), std::end(server_version));
    const auto thread_id = static_cast<std::uint32_t>(i + 1);
    for (int b = 0; b < 4; ++b) greeting.push_back(static_cast<std::uint8_t>(thread_id >> (8 * b)));
    greeting.insert(greeting.end(), rec.challenge.begin(), rec.challenge.end());
    greeting.push_back(0);
    put_packet(out, 0, greeting);

    std::vector<std::uint8_t> auth;
    auth.push_back(static_cast<std::uint8_t>(client_flags));
    auth.push_back(static_cast<std::uint8_t>(client_flags >> 8));
    for (int b = 0; b < 3; ++b) auth.push_back(static_cast<std::uint8_t>(max_packet >> (8 * b)));
    auth.insert(auth.end(), user.begin(), user.end());
    auth.push_back(0);
    auth.insert(auth.end(), rec.response.begin(), rec.response.end());
    auth.push_back(0);
    put_packet(out, 1, auth);
  }
  return out;
}

std::vector<CaptureSession> parse_capture(std::span<const std::uint8_t> capture) {
  std::vector<CaptureSession> out;
  PacketReader packets(capture);
  while (!packets.done()) {
    CaptureSession session;

    const auto greeting = packets.next("greeting");
    FieldReader g(greeting, "greeting");
    const std::size_t version_at = g.offset();
    if (g.uint_le(1, "protocol version") != protocol_version) {
      throw ParseError(ParseError::Unit::byte_offset, version_at, "unsupported protocol version");
    }
    g.c_string("server version");
    g.uint_le(4, "thread id");
    auto challenge = g.bytes(8, "challenge");
    std::copy(challenge.begin(), challenge.end(), session.record.challenge.begin());
    g.nul("challenge");

    const auto auth = packets.next("auth");
    FieldReader a(auth, "auth");
    a.uint_le(2, "client flags");
    a.uint_le(3, "max packet size");
    session.username = a.c_string("user name");
    const std::size_t response_at = a.offset();
    auto response = a.bytes(8, "response");
    for (std::size_t i = 0; i < response.size(); ++i) {
      if (!response_byte_ok(response[i])) {
        throw ParseError(ParseError::Unit::byte_offset, response_at + i,
                         "response byte outside [0x40, 0x60)");
      }
    }
    std::copy(response.begin(), response.end(), session.record.response.begin());
    a.nul("response");

    out.push_back(std::move(session));
  }
  return out;
}

}  // namespace oldauth
