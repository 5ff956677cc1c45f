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

#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "wfslab/errors.hpp"

namespace wfslab::osc {

class EncodeError : public Error {
 public:
  using Error::Error;
};

struct Blob {
  std::vector<std::uint8_t> bytes;
  bool operator==(const Blob&) const = default;
};

using Argument = std::variant<std::int32_t, float, std::string, Blob>;

struct Message {
  std::string address;
  std::vector<Argument> args;

  bool operator==(const Message& other) const;
};

/// OSC 1.0 single-message layout (no bundles).
std::vector<std::uint8_t> encode(const Message& msg);

Message decode(std::span<const std::uint8_t> bytes);

std::string hex_dump(std::span<const std::uint8_t> bytes);

struct PositionCommand {
  int source_id = 0;
  double x = 0.0;
  double y = 0.0;
};

struct TrajectoryCommand {
  int source_id = 0;
  double start_x = 0.0, start_y = 0.0;
  double end_x = 0.0, end_y = 0.0;
  double duration = 1.0;
};

// Address templates; "{id}" is replaced by the source id.
struct AddressSchema {
  std::string position = "/source/{id}/position";
  std::string trajectory = "/source/{id}/trajectory";

  /// Reads key=value lines (keys: position, trajectory); '#' starts a comment.
  static AddressSchema load(const std::string& path);
  static AddressSchema parse(const std::string& text, const std::string& origin = "<schema>");
};

Message position_message(const PositionCommand& cmd, const AddressSchema& schema = {});
Message trajectory_message(const TrajectoryCommand& cmd, const AddressSchema& schema = {});

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  /// "host:port"; throws InvalidArgument on malformed text.
  static Endpoint parse(const std::string& text);
};

// Owns one UDP socket bound to a single destination.
class UdpSender {
 public:
  explicit UdpSender(const Endpoint& endpoint);
  ~UdpSender();
  UdpSender(const UdpSender&) = delete;
  UdpSender& operator=(const UdpSender&) = delete;
  UdpSender(UdpSender&& other) noexcept;
  UdpSender& operator=(UdpSender&& other) noexcept;

  void send(std::span<const std::uint8_t> datagram);

 private:
  int fd_ = -1;
};

struct SendReport {
  std::string address;
  std::size_t bytes = 0;
};

// Fire-and-forget: no reply is awaited.
SendReport send_position(const PositionCommand& cmd, UdpSender& sender,
                         const AddressSchema& schema = {});
SendReport send_trajectory(const TrajectoryCommand& cmd, UdpSender& sender,
                           const AddressSchema& schema = {});

// Serializes sends from many threads through one socket, preserving the order
// in which messages were posted.
class QueuedSender {
 public:
  explicit QueuedSender(UdpSender sender);
  ~QueuedSender();
  QueuedSender(const QueuedSender&) = delete;
  QueuedSender& operator=(const QueuedSender&) = delete;

  void post(const Message& msg);
  /// Blocks until the queue drains; rethrows the first transport failure.
  void flush();

 private:
  void run();

  UdpSender sender_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::vector<std::uint8_t>> queue_;
  std::exception_ptr failure_;
  bool busy_ = false;
  bool stopping_ = false;
  std::thread worker_;
};

// Loopback receiver used by the CLI self-check and tests.
class UdpReceiver {
 public:
  /// Binds 127.0.0.1 on the given port (0 picks a free one).
  explicit UdpReceiver(std::uint16_t port = 0);
  ~UdpReceiver();
  UdpReceiver(const UdpReceiver&) = delete;
  UdpReceiver& operator=(const UdpReceiver&) = delete;

  [[nodiscard]] std::uint16_t port() const { return port_; }
  /// Returns an empty vector on timeout.
  std::vector<std::uint8_t> receive(int timeout_ms = 1000);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace wfslab::osc
