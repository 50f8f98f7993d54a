#ifndef CSANITIZE_DOCIO_HPP
#define CSANITIZE_DOCIO_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace csan {

struct RawDocument {
  std::string doc_id;
  std::string text;
};

// Reads documents from a UTF-8 plain-text file, a directory of .txt files
// (sorted by name), or — with lines_mode — a single file holding one
// document per line (ids become "<stem>-<lineno>").
std::vector<RawDocument> read_documents(const std::filesystem::path& path,
                                        bool lines_mode);

std::string read_text_file(const std::filesystem::path& path);

// Write-then-rename so readers never observe a half-written file.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace csan

#endif  // CSANITIZE_DOCIO_HPP
