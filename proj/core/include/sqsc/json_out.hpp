#pragma once
//
// Tiny deterministic JSON emitter (insertion-ordered keys, 17-digit numbers).
// Kept dependency-free so the installed core library carries no third-party
// headers; the CLI uses a full JSON parser only for reading config files.
//

#include <string>
#include <vector>

namespace sqsc {

/// Streaming JSON writer. Values are emitted in call order; the caller is
/// responsible for balanced begin/end pairs (checked at str()).
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);  // non-finite values become null
  JsonWriter& value(long long v);
  JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(unsigned long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& null();

  template <typename T>
  JsonWriter& kv(const std::string& k, const T& v) {
    key(k);
    return value(v);
  }
  JsonWriter& kv_null(const std::string& k) {
    key(k);
    return null();
  }

  /// Finished document; throws if containers are unbalanced.
  std::string str() const;

 private:
  void comma();
  void escape(const std::string& s);

  std::string out_;
  std::vector<char> stack_;  // '{' or '['
  bool need_comma_ = false;
  bool after_key_ = false;
};

}  // namespace sqsc
