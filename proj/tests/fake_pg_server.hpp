/*
 * Copyright 2026 sqlxdiff project.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// Scripted PostgreSQL wire-protocol server for tests.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstring>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace sqlxd::testing {

enum class Auth { Trust, Cleartext, Md5, Scram };

struct Reply {
  std::vector<std::pair<std::string, int>> columns;  // name, type oid
  std::vector<std::vector<std::optional<std::string>>> rows;
  std::string error;  // non-empty: send ErrorResponse
  std::chrono::milliseconds delay{0};
};

inline std::string hex(const unsigned char* p, std::size_t n) {
  static const char* d = "0123456789abcdef";
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    s += d[p[i] >> 4];
    s += d[p[i] & 15];
  }
  return s;
}

inline std::string md5hex(const std::string& in) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_Digest(in.data(), in.size(), out, &len, EVP_md5(), nullptr);
  return hex(out, len);
}

inline std::string hmac(const std::string& key, const std::string& msg) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), reinterpret_cast<const unsigned char*>(msg.data()),
       msg.size(), out, &len);
  return {reinterpret_cast<char*>(out), len};
}

inline std::string sha256(const std::string& in) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_Digest(in.data(), in.size(), out, &len, EVP_sha256(), nullptr);
  return {reinterpret_cast<char*>(out), len};
}

inline std::string b64(const std::string& in) {
  std::string out(4 * ((in.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(in.data()), static_cast<int>(in.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

inline std::string unb64(const std::string& in) {
  std::string out(3 * in.size() / 4 + 3, '\0');
  int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(in.data()), static_cast<int>(in.size()));
  if (!in.empty() && in.back() == '=') --n;
  if (in.size() > 1 && in[in.size() - 2] == '=') --n;
  out.resize(static_cast<std::size_t>(std::max(n, 0)));
  return out;
}

inline void put32(std::string& s, std::int32_t v) {
  const auto u = static_cast<std::uint32_t>(v);
  for (int sh = 24; sh >= 0; sh -= 8) s += static_cast<char>((u >> sh) & 0xff);
}
inline void put16(std::string& s, std::int16_t v) {
  s += static_cast<char>((v >> 8) & 0xff);
  s += static_cast<char>(v & 0xff);
}

class FakeServer {
 public:
  FakeServer(Auth auth, std::string password = "secret") : auth_(auth), password_(std::move(password)) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    ::listen(listen_fd_, 8);
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    thread_ = std::thread([this] { serve(); });
  }
  ~FakeServer() {
    stop_ = true;
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    thread_.join();
  }

  int port() const { return port_; }
  void on(const std::string& sql, Reply r) { script_[sql] = std::move(r); }
  /// Fallback for statements without a scripted reply.
  void otherwise(std::function<Reply(const std::string&)> fn) { fallback_ = std::move(fn); }
  int connections() const { return connections_; }
  std::vector<std::string> seen() const {
    std::lock_guard<std::mutex> g(mu_);
    return seen_;
  }

 private:
  bool read_n(int fd, std::string& out, std::size_t n) {
    out.resize(n);
    std::size_t got = 0;
    while (got < n) {
      const ssize_t r = ::recv(fd, out.data() + got, n - got, 0);
      if (r <= 0) return false;
      got += static_cast<std::size_t>(r);
    }
    return true;
  }
  bool read_msg(int fd, char& type, std::string& body) {
    std::string head;
    if (!read_n(fd, head, 5)) return false;
    type = head[0];
    const auto len = (static_cast<unsigned char>(head[1]) << 24) | (static_cast<unsigned char>(head[2]) << 16) |
                     (static_cast<unsigned char>(head[3]) << 8) | static_cast<unsigned char>(head[4]);
    return read_n(fd, body, len - 4);
  }
  static void send_msg(int fd, char type, const std::string& body) {
    std::string m(1, type);
    put32(m, static_cast<std::int32_t>(body.size() + 4));
    m += body;
    ::send(fd, m.data(), m.size(), MSG_NOSIGNAL);
  }
  static void auth_req(int fd, std::int32_t code, const std::string& extra = "") {
    std::string b;
    put32(b, code);
    send_msg(fd, 'R', b + extra);
  }
  static void error(int fd, const std::string& code, const std::string& msg) {
    std::string b = "SERROR";
    b += '\0';
    b += "C" + code + '\0' + "M" + msg + '\0' + '\0';
    send_msg(fd, 'E', b);
  }

  bool authenticate(int fd, const std::string& user) {
    char t;
    std::string body;
    switch (auth_) {
      case Auth::Trust: break;
      case Auth::Cleartext:
        auth_req(fd, 3);
        if (!read_msg(fd, t, body) || body != password_ + '\0') return error(fd, "28P01", "bad password"), false;
        break;
      case Auth::Md5: {
        const std::string salt = "\x01\x02\x03\x04";
        auth_req(fd, 5, salt);
        const std::string want = "md5" + md5hex(md5hex(password_ + user) + salt) + '\0';
        if (!read_msg(fd, t, body) || body != want) return error(fd, "28P01", "bad password"), false;
        break;
      }
      case Auth::Scram: {
        auth_req(fd, 10, std::string("SCRAM-SHA-256") + '\0' + '\0');
        if (!read_msg(fd, t, body)) return false;
        const std::string client_first = body.substr(std::strlen(body.c_str()) + 1 + 4);
        const std::string bare = client_first.substr(3);  // drop "n,,"
        const std::string cnonce = bare.substr(bare.find("r=") + 2);
        const std::string salt = "saltsaltsalt", nonce = cnonce + "srv";
        const std::string server_first = "r=" + nonce + ",s=" + b64(salt) + ",i=4096";
        auth_req(fd, 11, server_first);
        if (!read_msg(fd, t, body)) return false;
        const auto p = body.find(",p=");
        const std::string without_proof = body.substr(0, p), proof = unb64(body.substr(p + 3));
        std::string salted(32, '\0');
        PKCS5_PBKDF2_HMAC(password_.data(), static_cast<int>(password_.size()),
                          reinterpret_cast<const unsigned char*>(salt.data()), static_cast<int>(salt.size()), 4096,
                          EVP_sha256(), 32, reinterpret_cast<unsigned char*>(salted.data()));
        const std::string auth = bare + "," + server_first + "," + without_proof;
        const std::string stored = sha256(hmac(salted, "Client Key"));
        const std::string sig = hmac(stored, auth);
        std::string key = proof;
        for (std::size_t i = 0; i < key.size() && i < sig.size(); ++i) key[i] ^= sig[i];
        if (sha256(key) != stored) return error(fd, "28P01", "password authentication failed"), false;
        auth_req(fd, 12, "v=" + b64(hmac(hmac(salted, "Server Key"), auth)));
        break;
      }
    }
    auth_req(fd, 0);
    send_msg(fd, 'Z', "I");
    return true;
  }

  void serve() {
    while (!stop_) {
      const int fd = ::accept(listen_fd_, nullptr, nullptr);
      if (fd < 0) return;
      ++connections_;
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      std::string head, body;
      if (read_n(fd, head, 4)) {
        const auto len = (static_cast<unsigned char>(head[0]) << 24) | (static_cast<unsigned char>(head[1]) << 16) |
                         (static_cast<unsigned char>(head[2]) << 8) | static_cast<unsigned char>(head[3]);
        if (read_n(fd, body, len - 4)) {
          const std::string user = body.c_str() + 4 + 5;  // after version and "user\0"
          if (authenticate(fd, user)) session(fd);
        }
      }
      ::close(fd);
    }
  }

  void session(int fd) {
    char t;
    std::string body;
    while (read_msg(fd, t, body)) {
      if (t == 'X') return;
      if (t != 'Q') continue;
      const std::string sql = body.c_str();
      {
        std::lock_guard<std::mutex> g(mu_);
        seen_.push_back(sql);
      }
      auto it = script_.find(sql);
      Reply r = it != script_.end() ? it->second : (fallback_ ? fallback_(sql) : Reply{});
      if (r.delay.count()) {
        std::this_thread::sleep_for(r.delay);
        return;  // client has given up; drop the connection
      }
      if (!r.error.empty()) {
        error(fd, "XX000", r.error);
      } else if (!r.columns.empty()) {
        std::string d;
        put16(d, static_cast<std::int16_t>(r.columns.size()));
        for (const auto& [name, oid] : r.columns) {
          d += name + '\0';
          put32(d, 0);
          put16(d, 0);
          put32(d, oid);
          put16(d, -1);
          put32(d, -1);
          put16(d, 0);
        }
        send_msg(fd, 'T', d);
        for (const auto& row : r.rows) {
          std::string b;
          put16(b, static_cast<std::int16_t>(row.size()));
          for (const auto& cell : row) {
            put32(b, cell ? static_cast<std::int32_t>(cell->size()) : -1);
            if (cell) b += *cell;
          }
          send_msg(fd, 'D', b);
        }
        send_msg(fd, 'C', std::string("SELECT") + '\0');
      } else {
        send_msg(fd, 'C', std::string("OK") + '\0');
      }
      send_msg(fd, 'Z', "I");
    }
  }

  Auth auth_;
  std::string password_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::thread thread_;
  std::atomic<bool> stop_{false};
  std::atomic<int> connections_{0};
  std::map<std::string, Reply> script_;
  std::function<Reply(const std::string&)> fallback_;
  mutable std::mutex mu_;
  std::vector<std::string> seen_;
};

}  // namespace sqlxd::testing
