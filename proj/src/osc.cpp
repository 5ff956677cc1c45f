// Copyright 2026 The wfslab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wfslab/osc.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wfslab/csv.hpp"

namespace wfslab::osc {

namespace {

std::size_t padded(std::size_t n) { return (n + 3) & ~std::size_t{3}; }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_string(std::vector<std::uint8_t>& out, const std::string& s) {
  out.insert(out.end(), s.begin(), s.end());
  const std::size_t total = padded(s.size() + 1);
  out.insert(out.end(), total - s.size(), 0);
}

char tag_of(const Argument& arg) {
  switch (arg.index()) {
    case 0: return 'i';
    case 1: return 'f';
    case 2: return 's';
    default: return 'b';
  }
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  [[nodiscard]] std::size_t offset() const { return pos_; }
  [[nodiscard]] bool done() const { return pos_ == bytes_.size(); }

  std::uint32_t u32() {
    if (bytes_.size() - pos_ < 4) throw DecodeError("truncated 32-bit value", pos_);
    const std::uint32_t v = (std::uint32_t{bytes_[pos_]} << 24) |
                            (std::uint32_t{bytes_[pos_ + 1]} << 16) |
                            (std::uint32_t{bytes_[pos_ + 2]} << 8) | std::uint32_t{bytes_[pos_ + 3]};
    pos_ += 4;
    return v;
  }

  std::string string() {
    const std::size_t start = pos_;
    std::size_t end = start;
    while (end < bytes_.size() && bytes_[end] != 0) ++end;
    if (end == bytes_.size()) throw DecodeError("unterminated string", start);
    const std::size_t next = start + padded(end - start + 1);
    if (next > bytes_.size()) throw DecodeError("truncated string padding", end);
    for (std::size_t i = end; i < next; ++i) {
      if (bytes_[i] != 0) throw DecodeError("non-zero string padding", i);
    }
    pos_ = next;
    return std::string(reinterpret_cast<const char*>(bytes_.data() + start), end - start);
  }

  Blob blob() {
    const std::size_t at = pos_;
    const std::uint32_t len = u32();
    const std::size_t next = pos_ + padded(len);
    if (len > bytes_.size() - pos_ || next > bytes_.size()) {
      throw DecodeError("truncated blob", at);
    }
    Blob b;
    b.bytes.assign(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                   bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
    for (std::size_t i = pos_ + len; i < next; ++i) {
      if (bytes_[i] != 0) throw DecodeError("non-zero blob padding", i);
    }
    pos_ = next;
    return b;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string expand(const std::string& pattern, int id) {
  std::string out = pattern;
  const auto at = out.find("{id}");
  if (at != std::string::npos) out.replace(at, 4, std::to_string(id));
  return out;
}

}  // namespace

bool Message::operator==(const Message& other) const {
  if (address != other.address || args.size() != other.args.size()) return false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].index() != other.args[i].index()) return false;
    if (const auto* f = std::get_if<float>(&args[i])) {
      // Bitwise, so NaN payloads compare equal to themselves.
      if (std::bit_cast<std::uint32_t>(*f) != std::bit_cast<std::uint32_t>(std::get<float>(other.args[i]))) {
        return false;
      }
    } else if (args[i] != other.args[i]) {
      return false;
    }
  }
  return true;
}

std::vector<std::uint8_t> encode(const Message& msg) {
  if (msg.address.empty() || msg.address.front() != '/') {
    throw EncodeError("address must start with '/'");
  }
  for (unsigned char ch : msg.address) {
    if (ch == 0 || ch > 0x7F) throw EncodeError("address must be printable ASCII");
  }

  std::vector<std::uint8_t> out;
  put_string(out, msg.address);
  std::string tags = ",";
  for (const auto& a : msg.args) tags += tag_of(a);
  put_string(out, tags);

  for (const auto& a : msg.args) {
    if (const auto* i = std::get_if<std::int32_t>(&a)) {
      put_u32(out, static_cast<std::uint32_t>(*i));
    } else if (const auto* f = std::get_if<float>(&a)) {
      put_u32(out, std::bit_cast<std::uint32_t>(*f));
    } else if (const auto* s = std::get_if<std::string>(&a)) {
      if (s->find('\0') != std::string::npos) throw EncodeError("string argument contains NUL");
      put_string(out, *s);
    } else {
      const auto& b = std::get<Blob>(a);
      put_u32(out, static_cast<std::uint32_t>(b.bytes.size()));
      out.insert(out.end(), b.bytes.begin(), b.bytes.end());
      out.insert(out.end(), padded(b.bytes.size()) - b.bytes.size(), 0);
    }
  }
  return out;
}

Message decode(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw DecodeError("empty packet", 0);
  if (bytes.size() % 4 != 0) throw DecodeError("packet length is not a multiple of 4", bytes.size());

  Reader in(bytes);
  Message msg;
  msg.address = in.string();
  if (msg.address.empty() || msg.address.front() != '/') throw DecodeError("bad address", 0);

  const std::size_t tag_offset = in.offset();
  if (in.done()) throw DecodeError("missing type tag string", tag_offset);
  const std::string tags = in.string();
  if (tags.empty() || tags.front() != ',') throw DecodeError("type tags must start with ','", tag_offset);

  for (std::size_t k = 1; k < tags.size(); ++k) {
    switch (tags[k]) {
      case 'i': msg.args.emplace_back(static_cast<std::int32_t>(in.u32())); break;
      case 'f': msg.args.emplace_back(std::bit_cast<float>(in.u32())); break;
      case 's': msg.args.emplace_back(in.string()); break;
      case 'b': msg.args.emplace_back(in.blob()); break;
      default:
        throw DecodeError(std::string("unknown type tag '") + tags[k] + "'", tag_offset + k);
    }
  }
  if (!in.done()) throw DecodeError("trailing bytes after arguments", in.offset());
  return msg;
}

std::string hex_dump(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (i) out += (i % 16 == 0) ? '\n' : ' ';
    out += kDigits[bytes[i] >> 4];
    out += kDigits[bytes[i] & 0xF];
  }
  return out;
}

AddressSchema AddressSchema::parse(const std::string& text, const std::string& origin) {
  AddressSchema schema;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto body = csv::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(origin, lineno, "expected key=value");
    const std::string key(csv::trim(body.substr(0, eq)));
    const std::string value(csv::trim(body.substr(eq + 1)));
    if (value.empty() || value.front() != '/') {
      throw ParseError(origin, lineno, "address for '" + key + "' must start with '/'");
    }
    if (key == "position") {
      schema.position = value;
    } else if (key == "trajectory") {
      schema.trajectory = value;
    } else {
      throw ParseError(origin, lineno, "unknown key '" + key + "'");
    }
  }
  return schema;
}

AddressSchema AddressSchema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open address schema " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

Message position_message(const PositionCommand& cmd, const AddressSchema& schema) {
  if (cmd.source_id < 0) throw InvalidArgument("source id must be non-negative");
  if (!std::isfinite(cmd.x) || !std::isfinite(cmd.y)) throw InvalidArgument("non-finite position");
  return {expand(schema.position, cmd.source_id),
          {static_cast<float>(cmd.x), static_cast<float>(cmd.y)}};
}

Message trajectory_message(const TrajectoryCommand& cmd, const AddressSchema& schema) {
  if (cmd.source_id < 0) throw InvalidArgument("source id must be non-negative");
  if (!(cmd.duration > 0.0)) throw InvalidArgument("trajectory duration must be positive");
  for (double v : {cmd.start_x, cmd.start_y, cmd.end_x, cmd.end_y, cmd.duration}) {
    if (!std::isfinite(v)) throw InvalidArgument("non-finite trajectory value");
  }
  return {expand(schema.trajectory, cmd.source_id),
          {static_cast<float>(cmd.start_x), static_cast<float>(cmd.start_y),
           static_cast<float>(cmd.end_x), static_cast<float>(cmd.end_y),
           static_cast<float>(cmd.duration)}};
}

Endpoint Endpoint::parse(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw InvalidArgument("endpoint must look like host:port, got '" + text + "'");
  }
  int port = 0;
  if (!csv::parse(std::string_view(text).substr(colon + 1), port) || port < 1 || port > 65535) {
    throw InvalidArgument("invalid port in endpoint '" + text + "'");
  }
  return {text.substr(0, colon), static_cast<std::uint16_t>(port)};
}

SendReport send_position(const PositionCommand& cmd, UdpSender& sender,
                         const AddressSchema& schema) {
  const auto msg = position_message(cmd, schema);
  const auto bytes = encode(msg);
  sender.send(bytes);
  return {msg.address, bytes.size()};
}

SendReport send_trajectory(const TrajectoryCommand& cmd, UdpSender& sender,
                           const AddressSchema& schema) {
  const auto msg = trajectory_message(cmd, schema);
  const auto bytes = encode(msg);
  sender.send(bytes);
  return {msg.address, bytes.size()};
}

}  // namespace wfslab::osc
