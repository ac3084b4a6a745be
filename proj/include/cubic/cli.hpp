#pragma once

#include <fstream>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubic/numeric.hpp"
#include "json.hpp"

namespace CLI {
class App;
}

namespace cubic::cli {

using Json = nlohmann::ordered_json;

std::string tool_version();
std::string sha256_hex(std::string_view data);
std::string file_digest(const std::string& path);
std::string utc_timestamp();

struct RunManifest {
  std::string command;  // subcommand path, e.g. "census eligible-pairs"
  std::map<std::string, std::string> parameters;
  std::string version;
  std::map<std::string, std::string> input_digests;
  std::string timestamp;

  Json to_json() const;
  static RunManifest from_json(const Json& j);
  // SHA-256 over everything except the timestamp.
  std::string digest() const;
  // Arguments that rerun the same command with the same parameters and timestamp.
  std::vector<std::string> replay_args() const;
};

// Reads the manifest from a manifest file or from the first line of an output file.
RunManifest load_manifest(const std::string& path);

struct ParamSpec {
  std::string name;
  std::string fallback;
  std::string help;
  bool recorded = true;  // part of the manifest parameters
};

// Resolution order: flag, then CUBIC_<NAME> from the environment, then the config file, then the fallback.
class Params {
 public:
  void declare(CLI::App* app, const std::vector<ParamSpec>& specs);
  void resolve();

  const std::string& str(const std::string& name) const;
  bool given(const std::string& name) const;  // set by any source other than the fallback
  long integer(const std::string& name) const;
  Integer big(const std::string& name) const;
  Rational rational(const std::string& name) const;
  bool boolean(const std::string& name) const;
  std::vector<std::string> list(const std::string& name) const;
  std::map<std::string, std::string> recorded() const;
  void set(const std::string& name, const std::string& value);

 private:
  std::vector<ParamSpec> specs_;
  std::map<std::string, std::string> raw_;  // bound to the flags
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> given_;
  std::map<std::string, CLI::App*> owner_;
};

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path);

Integer parse_integer(std::string_view text);  // also accepts 1e6 and 10^6

enum class Format { jsonl, csv };

// Records go to <path>.partial, renamed to <path> on commit. A checkpoint file <path>.ckpt
// holds the manifest digest, the record count and the byte offset.
class OutputFile {
 public:
  OutputFile(std::string path, const RunManifest& manifest, Format format, bool resume);
  long resumed_records() const { return resumed_; }
  long records() const { return records_; }
  void write(const std::string& line);
  void checkpoint();
  void commit();
  const std::string& path() const { return path_; }

 private:
  std::string path_, partial_, ckpt_, digest_;
  std::ofstream out_;
  long resumed_ = 0;
  long records_ = 0;
};

std::string manifest_line(const RunManifest& m, Format format);

// Human summaries: 15 significant digits.
std::string fmt(long double x);

// Exit codes: 0 success, 1 user error, 2 budget-undetermined, 3 internal invariant violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cubic::cli
