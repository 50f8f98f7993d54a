#include "csanitize/docio.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "csanitize/errors.hpp"

namespace csan {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw InputError("failed reading file: " + path.string());
  return std::move(buffer).str();
}

std::vector<RawDocument> read_documents(const fs::path& path,
                                        bool lines_mode) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw InputError("input path does not exist: " + path.string());
  }

  std::vector<RawDocument> docs;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      docs.push_back({file.stem().string(), read_text_file(file)});
    }
    return docs;
  }

  if (lines_mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      docs.push_back(
          {path.stem().string() + "-" + std::to_string(line_no), line});
    }
    return docs;
  }

  docs.push_back({path.stem().string(), read_text_file(path)});
  return docs;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("failed writing file: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    throw InputError("cannot rename " + tmp.string() + " to " +
                     path.string() + ": " + ec.message());
  }
}

}  // namespace csan
