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
#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <regex>

#include "sqlxd/errors.hpp"
#include "sqlxd/exec.hpp"

namespace sqlxd {

namespace {

using Clock = std::chrono::steady_clock;

struct Timeout {};

struct Message {
  char type = 0;
  std::string body;
};

class Reader {
 public:
  explicit Reader(const std::string& b) : b_(b) {}
  std::int32_t i32() {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, b_.data() + pos_, 4);
    pos_ += 4;
    return static_cast<std::int32_t>(ntohl(v));
  }
  std::int16_t i16() {
    need(2);
    std::uint16_t v;
    std::memcpy(&v, b_.data() + pos_, 2);
    pos_ += 2;
    return static_cast<std::int16_t>(ntohs(v));
  }
  std::string cstr() {
    auto end = b_.find('\0', pos_);
    if (end == std::string::npos) throw ConnectionLost("malformed message: unterminated string");
    std::string s = b_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return s;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string rest() { return bytes(b_.size() - pos_); }
  bool done() const { return pos_ >= b_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > b_.size()) throw ConnectionLost("malformed message: truncated");
  }
  const std::string& b_;
  std::size_t pos_ = 0;
};

void put32(std::string& out, std::int32_t v) {
  std::uint32_t n = htonl(static_cast<std::uint32_t>(v));
  out.append(reinterpret_cast<const char*>(&n), 4);
}

std::string hex(const unsigned char* p, std::size_t n) {
  static const char* d = "0123456789abcdef";
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    s += d[p[i] >> 4];
    s += d[p[i] & 15];
  }
  return s;
}

std::string md5_hex(const std::string& data) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out, &len, EVP_md5(), nullptr);
  return hex(out, len);
}

std::string base64(const std::string& raw) {
  std::string out(4 * ((raw.size() + 2) / 3) + 1, '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(raw.data()), static_cast<int>(raw.size()));
  out.resize(n);
  return out;
}

std::string unbase64(const std::string& text) {
  std::string out(3 * text.size() / 4 + 1, '\0');
  int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  if (n < 0) throw ConnectionLost("bad base64 in SCRAM exchange");
  std::size_t pad = 0;
  for (auto it = text.rbegin(); it != text.rend() && *it == '='; ++it) ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::string hmac256(const std::string& key, const std::string& msg) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), reinterpret_cast<const unsigned char*>(msg.data()),
       msg.size(), out, &len);
  return std::string(reinterpret_cast<char*>(out), len);
}

std::string sha256_raw(const std::string& data) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out, &len, EVP_sha256(), nullptr);
  return std::string(reinterpret_cast<char*>(out), len);
}

std::map<std::string, std::string> scram_attrs(const std::string& msg) {
  std::map<std::string, std::string> out;
  std::size_t start = 0;
  while (start <= msg.size()) {
    auto end = msg.find(',', start);
    if (end == std::string::npos) end = msg.size();
    auto part = msg.substr(start, end - start);
    if (part.size() >= 2 && part[1] == '=') out[part.substr(0, 1)] = part.substr(2);
    start = end + 1;
  }
  return out;
}

DataType type_for_oid(std::int32_t oid) {
  switch (oid) {
    case 16: return {TypeKind::Boolean, {}};
    case 20: return {TypeKind::BigInteger, {}};
    case 21: return {TypeKind::SmallInteger, {}};
    case 23: return {TypeKind::Integer, {}};
    case 700:
    case 701:
    case 1700: return {TypeKind::Float, {}};
    case 1114:
    case 1184: return {TypeKind::Timestamp, {}};
    default: return {TypeKind::String, {}};
  }
}

Value decode(const std::string& text, TypeKind kind) {
  switch (kind) {
    case TypeKind::Boolean: return text == "t" || text == "true";
    case TypeKind::Integer:
    case TypeKind::BigInteger:
    case TypeKind::SmallInteger:
      try {
        return static_cast<std::int64_t>(std::stoll(text));
      } catch (const std::exception&) {
        return text;
      }
    case TypeKind::Float:
      if (text == "NaN") return std::nan("");
      if (text == "Infinity") return HUGE_VAL;
      if (text == "-Infinity") return -HUGE_VAL;
      return std::strtod(text.c_str(), nullptr);
    case TypeKind::Timestamp:
      if (auto ts = parse_timestamp_lenient(text)) return *ts;
      return text;
    default: return text;
  }
}

std::string error_text(const std::string& body) {
  Reader r(body);
  std::string message, code, detail;
  while (!r.done()) {
    std::string f = r.bytes(1);
    if (f[0] == '\0') break;
    std::string v = r.cstr();
    if (f[0] == 'M') message = v;
    if (f[0] == 'C') code = v;
    if (f[0] == 'D') detail = v;
  }
  std::string out = message;
  if (!detail.empty()) out += " (" + detail + ")";
  if (!code.empty()) out = code + ": " + out;
  return out;
}

}  // namespace

struct PgWireExecutor::Conn {
  int fd = -1;
  std::string buf;

  ~Conn() {
    if (fd >= 0) ::close(fd);
  }

  void send(char type, const std::string& body) {
    std::string out;
    if (type) out += type;
    put32(out, static_cast<std::int32_t>(body.size() + 4));
    out += body;
    std::size_t off = 0;
    while (off < out.size()) {
      ssize_t n = ::send(fd, out.data() + off, out.size() - off, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ConnectionLost(std::string("send failed: ") + std::strerror(errno));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  void fill(std::size_t want, Clock::time_point deadline) {
    while (buf.size() < want) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (left <= 0) throw Timeout{};
      pollfd p{fd, POLLIN, 0};
      int rc = ::poll(&p, 1, static_cast<int>(left));
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw ConnectionLost(std::string("poll failed: ") + std::strerror(errno));
      }
      if (rc == 0) throw Timeout{};
      char tmp[16384];
      ssize_t n = ::recv(fd, tmp, sizeof tmp, 0);
      if (n == 0) throw ConnectionLost("server closed the connection");
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw ConnectionLost(std::string("recv failed: ") + std::strerror(errno));
      }
      buf.append(tmp, static_cast<std::size_t>(n));
    }
  }

  Message recv(Clock::time_point deadline) {
    fill(5, deadline);
    std::uint32_t len;
    std::memcpy(&len, buf.data() + 1, 4);
    len = ntohl(len);
    if (len < 4) throw ConnectionLost("malformed message length");
    fill(1 + len, deadline);
    Message m{buf[0], buf.substr(5, len - 4)};
    buf.erase(0, 1 + len);
    return m;
  }
};

PgWireExecutor::PgWireExecutor(PgEndpoint endpoint, Dialect dialect)
    : cfg_(std::move(endpoint)), dialect_(std::move(dialect)) {}

PgWireExecutor::~PgWireExecutor() = default;

void PgWireExecutor::connect() {
  conn_.reset();
  auto c = std::make_unique<Conn>();
  const auto deadline = Clock::now() + cfg_.timeout;

  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (int rc = ::getaddrinfo(cfg_.host.c_str(), std::to_string(cfg_.port).c_str(), &hints, &res); rc != 0) {
    throw ConnectionLost("could not resolve " + cfg_.host + ": " + gai_strerror(rc));
  }
  std::string last_error = "no address";
  for (addrinfo* a = res; a; a = a->ai_next) {
    int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) {
      c->fd = fd;
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (c->fd < 0) {
    throw ConnectionLost("could not connect to " + cfg_.host + ":" + std::to_string(cfg_.port) + ": " + last_error);
  }
  int one = 1;
  ::setsockopt(c->fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);

  std::string startup;
  put32(startup, 196608);  // protocol 3.0
  startup += std::string("user") + '\0' + cfg_.user + '\0';
  startup += std::string("database") + '\0' + cfg_.database + '\0';
  startup += '\0';
  c->send(0, startup);

  std::string client_first_bare, nonce, server_first, salted;
  try {
    for (;;) {
      Message m = c->recv(deadline);
      if (m.type == 'E') throw ConnectionLost("connection rejected: " + error_text(m.body));
      if (m.type == 'Z') break;
      if (m.type != 'R') continue;
      Reader r(m.body);
      const std::int32_t code = r.i32();
      switch (code) {
        case 0: break;
        case 3: c->send('p', cfg_.password + '\0'); break;
        case 5: {
          const std::string salt = r.bytes(4);
          c->send('p', "md5" + md5_hex(md5_hex(cfg_.password + cfg_.user) + salt) + '\0');
          break;
        }
        case 10: {
          bool offered = false;
          for (std::string mech = r.cstr(); !mech.empty(); mech = r.cstr()) offered |= mech == "SCRAM-SHA-256";
          if (!offered) throw ConfigError("server offers no supported SASL mechanism");
          unsigned char raw[18];
          RAND_bytes(raw, sizeof raw);
          nonce = base64(std::string(reinterpret_cast<char*>(raw), sizeof raw));
          client_first_bare = "n=,r=" + nonce;
          const std::string first = "n,," + client_first_bare;
          std::string body = std::string("SCRAM-SHA-256") + '\0';
          put32(body, static_cast<std::int32_t>(first.size()));
          body += first;
          c->send('p', body);
          break;
        }
        case 11: {
          server_first = r.rest();
          auto attrs = scram_attrs(server_first);
          if (attrs["r"].rfind(nonce, 0) != 0) throw ConnectionLost("SCRAM nonce mismatch");
          const std::string salt = unbase64(attrs["s"]);
          const int iterations = std::stoi(attrs["i"]);
          salted.assign(32, '\0');
          PKCS5_PBKDF2_HMAC(cfg_.password.data(), static_cast<int>(cfg_.password.size()),
                            reinterpret_cast<const unsigned char*>(salt.data()), static_cast<int>(salt.size()),
                            iterations, EVP_sha256(), 32, reinterpret_cast<unsigned char*>(salted.data()));
          const std::string without_proof = "c=biws,r=" + attrs["r"];
          const std::string auth = client_first_bare + "," + server_first + "," + without_proof;
          const std::string client_key = hmac256(salted, "Client Key");
          const std::string signature = hmac256(sha256_raw(client_key), auth);
          std::string proof = client_key;
          for (std::size_t i = 0; i < proof.size(); ++i) proof[i] ^= signature[i];
          c->send('p', without_proof + ",p=" + base64(proof));
          server_first = auth;  // kept for verifying the server signature
          break;
        }
        case 12: {
          auto attrs = scram_attrs(r.rest());
          const std::string expected = hmac256(hmac256(salted, "Server Key"), server_first);
          if (unbase64(attrs["v"]) != expected) throw ConnectionLost("SCRAM server signature mismatch");
          break;
        }
        default: throw ConfigError("unsupported authentication request " + std::to_string(code));
      }
    }
  } catch (const Timeout&) {
    throw ConnectionLost("timed out connecting to " + cfg_.id);
  }
  conn_ = std::move(c);
}

ExecOutcome PgWireExecutor::run(const std::string& sql) {
  if (!conn_) connect();
  const auto start = Clock::now();
  const auto deadline = start + cfg_.timeout;
  ExecOutcome out;
  std::string error;
  try {
    conn_->send('Q', sql + '\0');
    for (;;) {
      Message m = conn_->recv(deadline);
      if (m.type == 'Z') break;
      if (m.type == 'T') {
        Reader r(m.body);
        const int n = r.i16();
        out.column_types.clear();
        for (int i = 0; i < n; ++i) {
          r.cstr();
          r.i32();
          r.i16();
          out.column_types.push_back(type_for_oid(r.i32()));
          r.i16();
          r.i32();
          r.i16();
        }
      } else if (m.type == 'D') {
        Reader r(m.body);
        const int n = r.i16();
        std::vector<Value> row;
        for (int i = 0; i < n; ++i) {
          const std::int32_t len = r.i32();
          if (len < 0) {
            row.emplace_back(std::monostate{});
            continue;
          }
          const TypeKind kind =
              i < static_cast<int>(out.column_types.size()) ? out.column_types[i].kind : TypeKind::String;
          row.push_back(decode(r.bytes(static_cast<std::size_t>(len)), kind));
        }
        out.rows.push_back(std::move(row));
      } else if (m.type == 'E') {
        if (error.empty()) error = error_text(m.body);
      }
    }
  } catch (const Timeout&) {
    conn_.reset();
    out = ExecOutcome::failure("TIMEOUT");
    out.latency = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
    return out;
  } catch (const ConnectionLost&) {
    conn_.reset();
    throw;
  }
  if (!error.empty()) out = ExecOutcome::failure(error);
  out.latency = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
  return out;
}

ExecOutcome PgWireExecutor::execute(const std::string& sql) {
  ExecOutcome out = run(sql);
  static const std::regex kCreate(R"(^\s*CREATE\s+TABLE\s+(?:IF\s+NOT\s+EXISTS\s+)?([A-Za-z_][A-Za-z0-9_]*))",
                                  std::regex::ECMAScript | std::regex::icase);
  std::smatch m;
  if (!out.is_error() && std::regex_search(sql, m, kCreate)) created_.push_back(m[1]);
  return out;
}

std::optional<std::string> PgWireExecutor::explain(const std::string& sql) {
  ExecOutcome out = run("EXPLAIN " + sql);
  if (out.is_error()) return std::nullopt;
  std::string text;
  for (const auto& row : out.rows) {
    if (row.empty()) continue;
    if (!text.empty()) text += '\n';
    const auto* line = std::get_if<std::string>(&row[0]);
    text += line ? *line : format_value(row[0]);
  }
  return text;
}

void PgWireExecutor::reset() {
  for (auto it = created_.rbegin(); it != created_.rend(); ++it) run("DROP TABLE IF EXISTS " + *it);
  created_.clear();
}

}  // namespace sqlxd
