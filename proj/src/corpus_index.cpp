#include "csanitize/corpus_index.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>

#include "csanitize/errors.hpp"

namespace csan {

namespace {

constexpr char kMagic[5] = {'C', 'S', 'I', 'D', 'X'};
constexpr std::uint32_t kFormatVersion = 1;

std::uint8_t unit_code(ContextUnit unit) {
  switch (unit) {
    case ContextUnit::document: return 0;
    case ContextUnit::paragraph: return 1;
    case ContextUnit::sentence: return 2;
  }
  return 0;
}

ContextUnit unit_from_code(std::uint8_t code, const std::string& path) {
  switch (code) {
    case 0: return ContextUnit::document;
    case 1: return ContextUnit::paragraph;
    case 2: return ContextUnit::sentence;
  }
  throw IndexLoadError(IndexLoadError::Reason::truncated,
                       path + ": unknown counting-unit code " +
                           std::to_string(code));
}

// CRC-32 (IEEE, reflected) over the serialized bytes.
std::uint32_t crc32(const std::uint8_t* data, std::size_t size) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) {
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      }
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < size; ++i) {
    crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
  }
  return crc ^ 0xFFFFFFFFu;
}

class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back((v >> (8 * i)) & 0xFF);
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back((v >> (8 * i)) & 0xFF);
  }
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      bytes_.push_back(static_cast<std::uint8_t>(v) | 0x80);
      v >>= 7;
    }
    bytes_.push_back(static_cast<std::uint8_t>(v));
  }
  void raw(const void* data, std::size_t size) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + size);
  }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size, std::string path)
      : data_(data), size_(size), path_(std::move(path)) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(data_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(data_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    int shift = 0;
    while (true) {
      need(1);
      std::uint8_t b = data_[pos_++];
      if (shift >= 64) truncated("varint overflow");
      v |= std::uint64_t(b & 0x7F) << shift;
      if ((b & 0x80) == 0) return v;
      shift += 7;
    }
  }
  void raw(void* out, std::size_t size) {
    need(size);
    std::memcpy(out, data_ + pos_, size);
    pos_ += size;
  }

  std::size_t pos() const { return pos_; }

  [[noreturn]] void truncated(const std::string& what) const {
    throw IndexLoadError(IndexLoadError::Reason::truncated,
                         path_ + ": truncated index file (" + what + ")");
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > size_) truncated("unexpected end of data");
  }

  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
  std::string path_;
};

}  // namespace

namespace detail {

void apply_generalization_closure(PostingsMap& postings,
                                  const Taxonomy& taxonomy) {
  PostingsMap inherited;
  for (const auto& [term, ids] : postings) {
    for (const CanonicalTerm& ancestor : taxonomy.generalizations(term)) {
      std::vector<std::uint32_t>& acc = inherited[ancestor];
      acc.insert(acc.end(), ids.begin(), ids.end());
    }
  }
  for (auto& [ancestor, ids] : inherited) {
    std::vector<std::uint32_t>& target = postings[ancestor];
    target.insert(target.end(), ids.begin(), ids.end());
    std::sort(target.begin(), target.end());
    target.erase(std::unique(target.begin(), target.end()), target.end());
  }
}

}  // namespace detail

CorpusIndex build_index(const std::vector<Document>& corpus_docs,
                        ContextUnit unit, const Taxonomy& taxonomy) {
  if (corpus_docs.empty()) throw InputError("empty corpus");

  CorpusIndex index;
  index.unit_ = unit;
  index.fingerprint_ = taxonomy.fingerprint();

  std::uint64_t next_context = 0;
  for (const Document& doc : corpus_docs) {
    for (const ContextSpan& span : doc.contexts) {
      if (span.unit != unit) {
        throw InputError("corpus document '" + doc.doc_id +
                         "' was segmented with unit '" +
                         to_string(span.unit) + "', index wants '" +
                         to_string(unit) + "'");
      }
    }
    for (const TermOccurrence& occ : doc.occurrences) {
      std::uint64_t context_id =
          next_context + static_cast<std::uint64_t>(occ.context_index);
      if (context_id > 0xFFFFFFFFull) {
        throw InputError("corpus exceeds 2^32 contexts");
      }
      index.postings_[occ.canonical].push_back(
          static_cast<std::uint32_t>(context_id));
    }
    next_context += doc.contexts.size();
  }
  if (next_context == 0) throw InputError("empty corpus");
  index.total_contexts_ = next_context;

  // Set semantics: one count per (term, context).
  for (auto& [term, ids] : index.postings_) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  detail::apply_generalization_closure(index.postings_, taxonomy);
  return index;
}

const std::vector<std::uint32_t>* CorpusIndex::postings(
    const CanonicalTerm& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

bool CorpusIndex::contains(const CanonicalTerm& term) const {
  const auto* ids = postings(term);
  return ids != nullptr && !ids->empty();
}

double CorpusIndex::probability(const CanonicalTerm& term) const {
  const auto* ids = postings(term);
  if (ids == nullptr || total_contexts_ == 0) return 0.0;
  return static_cast<double>(ids->size()) /
         static_cast<double>(total_contexts_);
}

double CorpusIndex::probability(std::span<const CanonicalTerm> terms) const {
  if (terms.empty() || total_contexts_ == 0) return 0.0;

  // Set semantics over the query: duplicates do not change the result.
  std::vector<const std::vector<std::uint32_t>*> lists;
  lists.reserve(terms.size());
  for (const CanonicalTerm& term : terms) {
    const auto* ids = postings(term);
    if (ids == nullptr || ids->empty()) return 0.0;
    if (std::find(lists.begin(), lists.end(), ids) == lists.end()) {
      lists.push_back(ids);
    }
  }
  std::sort(lists.begin(), lists.end(),
            [](const auto* a, const auto* b) { return a->size() < b->size(); });

  std::vector<std::uint32_t> acc = *lists.front();
  std::vector<std::uint32_t> next;
  for (std::size_t i = 1; i < lists.size() && !acc.empty(); ++i) {
    next.clear();
    std::set_intersection(acc.begin(), acc.end(), lists[i]->begin(),
                          lists[i]->end(), std::back_inserter(next));
    acc.swap(next);
  }
  return static_cast<double>(acc.size()) /
         static_cast<double>(total_contexts_);
}

std::vector<CanonicalTerm> CorpusIndex::vocabulary() const {
  std::vector<CanonicalTerm> terms;
  terms.reserve(postings_.size());
  for (const auto& [term, ids] : postings_) terms.push_back(term);
  std::sort(terms.begin(), terms.end());
  return terms;
}

void CorpusIndex::save(const std::filesystem::path& path) const {
  ByteWriter w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kFormatVersion);
  w.u64(total_contexts_);
  w.u8(unit_code(unit_));
  w.raw(fingerprint_.data(), fingerprint_.size());

  std::vector<CanonicalTerm> terms = vocabulary();
  w.u64(terms.size());
  for (const CanonicalTerm& term : terms) {
    w.varint(term.id().size());
    w.raw(term.id().data(), term.id().size());
  }
  for (const CanonicalTerm& term : terms) {
    const std::vector<std::uint32_t>& ids = postings_.at(term);
    w.varint(ids.size());
    std::uint32_t prev = 0;
    bool first = true;
    for (std::uint32_t id : ids) {
      w.varint(first ? id : id - prev);
      prev = id;
      first = false;
    }
  }
  std::uint32_t checksum = crc32(w.bytes().data(), w.bytes().size());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write index file: " + path.string());
  out.write(reinterpret_cast<const char*>(w.bytes().data()),
            static_cast<std::streamsize>(w.bytes().size()));
  char crc_bytes[4];
  for (int i = 0; i < 4; ++i)
    crc_bytes[i] = static_cast<char>((checksum >> (8 * i)) & 0xFF);
  out.write(crc_bytes, 4);
  if (!out) throw InputError("failed writing index file: " + path.string());
}

CorpusIndex CorpusIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open index file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());

  if (bytes.size() < sizeof kMagic + 4) {
    throw IndexLoadError(IndexLoadError::Reason::truncated,
                         path.string() + ": file too short");
  }
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw IndexLoadError(IndexLoadError::Reason::bad_magic,
                         path.string() + ": not a CSIDX index file");
  }

  // Verify the trailing checksum before trusting any lengths inside.
  std::size_t body_size = bytes.size() - 4;
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i)
    stored |= std::uint32_t(bytes[body_size + i]) << (8 * i);
  if (crc32(bytes.data(), body_size) != stored) {
    throw IndexLoadError(IndexLoadError::Reason::checksum_mismatch,
                         path.string() + ": checksum mismatch");
  }

  ByteReader r(bytes.data(), body_size, path.string());
  char magic[5];
  r.raw(magic, sizeof magic);
  std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw IndexLoadError(IndexLoadError::Reason::version_mismatch,
                         path.string() + ": format version " +
                             std::to_string(version) + ", expected " +
                             std::to_string(kFormatVersion));
  }

  CorpusIndex index;
  index.total_contexts_ = r.u64();
  index.unit_ = unit_from_code(r.u8(), path.string());
  r.raw(index.fingerprint_.data(), index.fingerprint_.size());

  std::uint64_t term_count = r.u64();
  std::vector<CanonicalTerm> terms;
  terms.reserve(term_count);
  for (std::uint64_t i = 0; i < term_count; ++i) {
    std::uint64_t len = r.varint();
    std::string id(len, '\0');
    r.raw(id.data(), len);
    terms.push_back(CanonicalTerm::from_canonical(std::move(id)));
  }
  for (const CanonicalTerm& term : terms) {
    std::uint64_t n = r.varint();
    std::vector<std::uint32_t> ids;
    ids.reserve(n);
    std::uint64_t cursor = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      cursor = (i == 0) ? r.varint() : cursor + r.varint();
      if (cursor >= index.total_contexts_) {
        r.truncated("context id out of range");
      }
      ids.push_back(static_cast<std::uint32_t>(cursor));
    }
    index.postings_.emplace(term, std::move(ids));
  }
  if (r.pos() != body_size) {
    r.truncated("trailing bytes after postings");
  }
  return index;
}

CorpusIndex CorpusIndex::load(const std::filesystem::path& path,
                              const Taxonomy& taxonomy) {
  CorpusIndex index = load(path);
  if (index.fingerprint_ != taxonomy.fingerprint()) {
    throw IndexLoadError(
        IndexLoadError::Reason::fingerprint_mismatch,
        path.string() + ": index was built with a different taxonomy (" +
            to_hex(index.fingerprint_) + " vs " +
            to_hex(taxonomy.fingerprint()) + ")");
  }
  return index;
}

}  // namespace csan
