#pragma once
// CSV tables, the JSON-lines ledger and content hashes.

#include <cstdint>
#include <mutex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace spinboard::runner {

using Cell = std::variant<std::string, double, long long, bool>;

// 17 significant digits, so the text round-trips to the same double.
std::string format_double(double x);
std::string format_cell(const Cell& c);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  std::string to_csv() const;  // RFC 4180, CRLF line ends
};

struct CheckRecord {
  std::string suite;
  std::string check;
  std::vector<std::pair<std::string, Cell>> inputs;
  double value = 0.0;
  double slack = 0.0;
  double sigma = 0.0;
  bool pass = false;
  bool hard = true;  // a failing hard check makes the run exit nonzero
};

std::string sha256_hex(const std::string& data);
// Hash git gives a file: sha1 of "blob <size>\0" + content.
std::string git_blob_id(const std::string& content);
// git_blob_id of the reference document compiled in as SPINBOARD_REFERENCE_DOC,
// or "unavailable" if it cannot be read.
std::string reference_doc_id();

// One JSON object per line. Appends are serialized through one mutex.
class Ledger {
 public:
  Ledger(std::string path, std::string config_sha256, std::string reference_id, std::uint64_t seed);
  void append(const CheckRecord& r);
  static std::string to_json_line(const CheckRecord& r, const std::string& config_sha256,
                                  const std::string& reference_id, std::uint64_t seed);

 private:
  std::string path_, config_hash_, reference_id_;
  std::uint64_t seed_;
  std::mutex mu_;
};

void write_text(const std::string& path, const std::string& text);

}  // namespace spinboard::runner
