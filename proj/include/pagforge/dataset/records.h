//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_DATASET_RECORDS_H_
#define PAGFORGE_DATASET_RECORDS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pagforge/chem/molecule.h"
#include "pagforge/util/error.h"

namespace pagforge::data {

struct Record {
  std::string smiles;  // as read
  std::string id;
  std::optional<double> lumo_ev;
  chem::Molecule mol;
  int line = 0;  // 1-based source line
};

// Thrown in strict mode; line is 1-based.
class IngestError: public Error {
public:
  IngestError(int line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) { }
  int line() const noexcept { return line_; }

private:
  int line_;
};

struct IngestReport {
  struct Skipped {
    int line;
    std::string text;
    std::string reason;
  };
  struct Duplicate {
    int line;
    int first_line;
    std::string canonical;
  };

  std::string path;
  int lines = 0;  // non-blank lines
  int records = 0;
  std::vector<Skipped> skipped;
  std::vector<Duplicate> duplicates;

  nlohmann::json to_json() const;
};

struct IngestOptions {
  bool strict = false;
};

struct IngestResult {
  std::vector<Record> records;
  IngestReport report;
};

/// Reads either SMILES-per-line text (optional whitespace-separated id) or a
/// CSV whose header is `smiles,id,lumo_ev`. Blank lines are ignored.
/// Records whose canonical form was seen before are kept and reported as
/// duplicates. Unparseable lines throw IngestError in strict mode and are
/// skipped otherwise. Throws NotFoundError when the file cannot be opened.
IngestResult ingest(const std::filesystem::path &path,
                    const IngestOptions &options = {});
// ingest over in-memory text; `name` labels the report.
IngestResult ingest_text(const std::string &text, const IngestOptions &options,
                         const std::string &name = "<memory>");

// Single-component molecules with net formal charge exactly +1.
bool is_monocation(const chem::Molecule &mol);
std::vector<Record> keep_cations(const std::vector<Record> &records);

/// 1 when lumo_ev <= threshold_ev, else 0. Throws InvalidArgument naming
/// the first record without a LUMO value.
std::vector<int> label_lumo(const std::vector<Record> &records,
                            double threshold_ev);

// Writes "<smiles>\t<id>" lines.
void write_smiles_file(const std::filesystem::path &path,
                       const std::vector<Record> &records);

} // namespace pagforge::data

#endif // PAGFORGE_DATASET_RECORDS_H_
