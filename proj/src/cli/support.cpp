#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "cubic/cli.hpp"

#ifndef CUBIC_VERSION
#define CUBIC_VERSION "0.0.0"
#endif

namespace cubic::cli {

namespace fs = std::filesystem;

std::string tool_version() { return std::string("cubic ") + CUBIC_VERSION; }

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw InvariantViolation("SHA-256 failed");
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return sha256_hex(os.str());
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json RunManifest::to_json() const {
  Json j;
  j["command"] = command;
  j["parameters"] = Json::object();
  for (const auto& [k, v] : parameters) j["parameters"][k] = v;
  j["version"] = version;
  j["input_digests"] = Json::object();
  for (const auto& [k, v] : input_digests) j["input_digests"][k] = v;
  j["timestamp"] = timestamp;
  return j;
}

RunManifest RunManifest::from_json(const Json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("parameters").items()) m.parameters[k] = v.get<std::string>();
    m.version = j.at("version").get<std::string>();
    for (const auto& [k, v] : j.at("input_digests").items()) m.input_digests[k] = v.get<std::string>();
    m.timestamp = j.at("timestamp").get<std::string>();
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::string RunManifest::digest() const {
  Json j = to_json();
  j.erase("timestamp");
  return sha256_hex(j.dump());
}

std::vector<std::string> RunManifest::replay_args() const {
  std::vector<std::string> args;
  std::istringstream is(command);
  for (std::string w; is >> w;) args.push_back(w);
  for (const auto& [k, v] : parameters) args.push_back("--" + k + "=" + v);
  args.push_back("--timestamp=" + timestamp);
  return args;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("# ", 0) == 0) line = line.substr(2);
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::exception&) {
    in.clear();
    in.seekg(0);
    std::ostringstream os;
    os << in.rdbuf();
    try {
      j = Json::parse(os.str());
    } catch (const Json::exception& e) {
      throw UsageError("no manifest in " + path + ": " + e.what());
    }
  }
  if (j.contains("manifest")) j = j["manifest"];
  return RunManifest::from_json(j);
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void Params::declare(CLI::App* app, const std::vector<ParamSpec>& specs) {
  for (const auto& s : specs) {
    specs_.push_back(s);
    raw_[s.name];
    owner_[s.name] = app;
    CLI::Option* o =
        app->add_option("--" + s.name, raw_[s.name], s.help + (s.fallback.empty() ? "" : " [" + s.fallback + "]"));
    if (s.fallback == "true" || s.fallback == "false") o->expected(0, 1)->default_str("true");
  }
}

void Params::resolve() {
  std::map<std::string, std::string> config;
  auto cfg = [&]() -> std::optional<std::string> {
    auto it = raw_.find("config");
    if (it != raw_.end() && owner_.at("config")->count("--config")) return it->second;
    if (const char* e = std::getenv("CUBIC_CONFIG")) return std::string(e);
    return std::nullopt;
  }();
  if (cfg && !cfg->empty()) config = read_config(*cfg);
  for (const auto& s : specs_) {
    std::string env = "CUBIC_";
    for (char c : s.name) env += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (owner_.at(s.name)->count("--" + s.name)) {
      values_[s.name] = raw_[s.name];
      given_[s.name] = true;
    } else if (const char* e = std::getenv(env.c_str())) {
      values_[s.name] = e;
      given_[s.name] = true;
    } else if (auto it = config.find(s.name); it != config.end()) {
      values_[s.name] = it->second;
      given_[s.name] = true;
    } else {
      values_[s.name] = s.fallback;
      given_[s.name] = false;
    }
  }
}

const std::string& Params::str(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw InvariantViolation("undeclared parameter " + name);
  return it->second;
}

bool Params::given(const std::string& name) const {
  auto it = given_.find(name);
  return it != given_.end() && it->second;
}

long Params::integer(const std::string& name) const {
  Integer z = big(name);
  if (!z.fits_slong_p()) throw UsageError("--" + name + " is out of range");
  return z.get_si();
}

Integer Params::big(const std::string& name) const {
  try {
    return parse_integer(str(name));
  } catch (const UsageError& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

Rational Params::rational(const std::string& name) const {
  try {
    return parse_rational(str(name));
  } catch (const UsageError& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

bool Params::boolean(const std::string& name) const {
  const std::string& v = str(name);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no" || v.empty()) return false;
  throw UsageError("--" + name + " expects true or false");
}

std::vector<std::string> Params::list(const std::string& name) const {
  std::vector<std::string> out;
  std::istringstream is(str(name));
  for (std::string w; std::getline(is, w, ',');)
    if (!w.empty()) out.push_back(w);
  return out;
}

std::map<std::string, std::string> Params::recorded() const {
  std::map<std::string, std::string> out;
  for (const auto& s : specs_)
    if (s.recorded) out[s.name] = values_.at(s.name);
  return out;
}

void Params::set(const std::string& name, const std::string& value) { values_[name] = value; }

Integer parse_integer(std::string_view text) {
  std::string t(text);
  auto pow_of = [&](std::size_t at, std::size_t skip, bool ten) {
    Integer base = parse_integer(t.substr(0, at));
    Integer e = parse_integer(t.substr(at + skip));
    if (e < 0 || e > 4096) throw UsageError("exponent out of range in '" + t + "'");
    Integer p;
    Integer b = ten ? Integer(10) : base;
    mpz_pow_ui(p.get_mpz_t(), b.get_mpz_t(), e.get_ui());
    return ten ? base * p : p;
  };
  if (auto k = t.find_first_of("eE"); k != std::string::npos) return pow_of(k, 1, true);
  if (auto k = t.find('^'); k != std::string::npos) return pow_of(k, 1, false);
  Rational q = parse_rational(t);
  if (q.get_den() != 1) throw UsageError("expected an integer, got '" + t + "'");
  return q.get_num();
}

std::string manifest_line(const RunManifest& m, Format format) {
  Json j;
  j["manifest"] = m.to_json();
  return (format == Format::csv ? "# " : "") + j.dump();
}

namespace {

void write_atomic(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw UsageError("cannot write " + tmp);
    o << text;
  }
  fs::rename(tmp, path);
}

}  // namespace

OutputFile::OutputFile(std::string path, const RunManifest& manifest, Format format, bool resume)
    : path_(std::move(path)), partial_(path_ + ".partial"), ckpt_(path_ + ".ckpt"), digest_(manifest.digest()) {
  if (resume) {
    if (!fs::exists(ckpt_) || !fs::exists(partial_)) throw UsageError("nothing to resume for " + path_);
    Json c;
    try {
      std::ifstream in(ckpt_);
      c = Json::parse(in);
    } catch (const Json::exception& e) {
      throw UsageError("unreadable checkpoint " + ckpt_ + ": " + e.what());
    }
    if (c.value("manifest_digest", "") != digest_)
      throw UsageError("checkpoint manifest does not match this run; refusing to resume " + path_);
    resumed_ = records_ = c.at("records").get<long>();
    fs::resize_file(partial_, c.at("bytes").get<std::uintmax_t>());
    out_.open(partial_, std::ios::binary | std::ios::app);
  } else {
    out_.open(partial_, std::ios::binary | std::ios::trunc);
    if (!out_) throw UsageError("cannot write " + partial_);
    out_ << manifest_line(manifest, format) << '\n';
    checkpoint();
  }
  if (!out_) throw UsageError("cannot write " + partial_);
}

void OutputFile::write(const std::string& line) {
  out_ << line << '\n';
  ++records_;
}

void OutputFile::checkpoint() {
  out_.flush();
  Json c;
  c["manifest_digest"] = digest_;
  c["records"] = records_;
  c["bytes"] = static_cast<std::uintmax_t>(fs::file_size(partial_));
  write_atomic(ckpt_, c.dump() + "\n");
}

void OutputFile::commit() {
  out_.flush();
  out_.close();
  fs::rename(partial_, path_);
  fs::remove(ckpt_);
}

std::string fmt(long double x) {
  std::ostringstream os;
  os << std::setprecision(15) << static_cast<double>(x);
  return os.str();
}

}  // namespace cubic::cli
