#include "sizelaw/extractor.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <deque>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "sizelaw/error.hpp"
#include "sizelaw/java_lexer.hpp"

namespace sizelaw {
namespace {

using java::Token;
using java::TokenKind;

constexpr std::string_view kDefaultPackage = "<default>";
constexpr int kMaxHierarchyDepth = 16;

// Simple names visible in every compilation unit without an import.
constexpr std::array<std::string_view, 84> kJavaLang = {
    "AbstractMethodError", "Appendable", "ArithmeticException", "ArrayIndexOutOfBoundsException",
    "ArrayStoreException", "AssertionError", "AutoCloseable", "Boolean", "Byte", "CharSequence",
    "Character", "Class", "ClassCastException", "ClassLoader", "ClassNotFoundException",
    "CloneNotSupportedException", "Cloneable", "Comparable", "Deprecated", "Double", "Enum",
    "EnumConstantNotPresentException", "Error", "Exception", "ExceptionInInitializerError",
    "Float", "FunctionalInterface", "IllegalAccessException", "IllegalArgumentException",
    "IllegalMonitorStateException", "IllegalStateException", "IllegalThreadStateException",
    "IncompatibleClassChangeError", "IndexOutOfBoundsException", "InheritableThreadLocal",
    "InstantiationException", "Integer", "InternalError", "InterruptedException", "Iterable",
    "LinkageError", "Long", "Math", "Module", "NegativeArraySizeException", "NoClassDefFoundError",
    "NoSuchFieldException", "NoSuchMethodException", "NullPointerException", "Number",
    "NumberFormatException", "Object", "OutOfMemoryError", "Override", "Package", "Process",
    "ProcessBuilder", "Readable", "Record", "ReflectiveOperationException", "Runnable", "Runtime",
    "RuntimeException", "SafeVarargs", "SecurityException", "Short", "StackOverflowError",
    "StackTraceElement", "StrictMath", "String", "StringBuffer", "StringBuilder",
    "StringIndexOutOfBoundsException", "SuppressWarnings", "System", "Thread", "ThreadGroup",
    "ThreadLocal", "Throwable", "TypeNotPresentException", "UnknownError",
    "UnsupportedOperationException", "VirtualMachineError", "Void"};

std::string boxed(std::string_view primitive) {
  static const std::map<std::string_view, std::string_view> kBoxes = {
      {"boolean", "Boolean"}, {"byte", "Byte"},   {"char", "Character"}, {"short", "Short"},
      {"int", "Integer"},     {"long", "Long"},   {"float", "Float"},    {"double", "Double"}};
  auto it = kBoxes.find(primitive);
  return it == kBoxes.end() ? std::string() : "java.lang." + std::string(it->second);
}

bool in_java_lang(std::string_view name) {
  return std::find(kJavaLang.begin(), kJavaLang.end(), name) != kJavaLang.end();
}

// Java naming convention: capitalized and not an ALL_CAPS constant.
bool looks_like_type(std::string_view name) {
  if (name.empty() || !std::isupper(static_cast<unsigned char>(name[0]))) return false;
  return std::any_of(name.begin(), name.end(),
                     [](char c) { return std::islower(static_cast<unsigned char>(c)); });
}

bool is_assignment(std::string_view op) {
  static constexpr std::array<std::string_view, 11> kOps = {
      "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", "++"};
  return op == "--" || std::find(kOps.begin(), kOps.end(), op) != kOps.end();
}

std::string join(const std::vector<std::string>& parts, std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < count && i < parts.size(); ++i) {
    if (i) out += '.';
    out += parts[i];
  }
  return out;
}

struct TypeRef {
  std::vector<std::string> names;
  std::vector<TypeRef> args;
  int dims = 0;
  bool primitive = false;
  bool is_void = false;
  bool wildcard = false;  // '?', bound (if any) stored in args
};

struct FileUnit {
  std::string path;
  std::vector<Token> tokens;
  std::vector<std::size_t> match;
  std::string package;
  EntityId package_id = kNoEntity;
  std::vector<std::string> imports;
  std::vector<std::string> wildcard_imports;
  std::vector<std::string> static_imports;
  std::vector<std::string> static_wildcards;

  const Token& tok(std::size_t i) const { return tokens[std::min(i, tokens.size() - 1)]; }
  bool is(std::size_t i, std::string_view text) const {
    const Token& t = tok(i);
    return (t.kind == TokenKind::Punct || t.kind == TokenKind::Identifier) && t.text == text;
  }
  bool ident(std::size_t i) const {
    const Token& t = tok(i);
    return t.kind == TokenKind::Identifier && !java::is_keyword(t.text);
  }
  std::size_t partner(std::size_t i) const {
    return i < match.size() ? match[i] : tokens.size() - 1;
  }
  std::size_t end() const { return tokens.size() - 1; }
};

void compute_matches(FileUnit& f) {
  f.match.assign(f.tokens.size(), f.tokens.size() - 1);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < f.tokens.size(); ++i) {
    const Token& t = f.tokens[i];
    if (t.kind != TokenKind::Punct) continue;
    if (t.text == "(" || t.text == "[" || t.text == "{") {
      stack.push_back(i);
      continue;
    }
    const char open = t.text == ")" ? '(' : t.text == "]" ? '[' : t.text == "}" ? '{' : '\0';
    if (open == '\0') continue;
    auto it = std::find_if(stack.rbegin(), stack.rend(),
                           [&](std::size_t s) { return f.tokens[s].text[0] == open; });
    if (it == stack.rend()) continue;
    const std::size_t opener = *it;
    stack.erase(std::next(it).base(), stack.end());
    f.match[opener] = i;
    f.match[i] = opener;
  }
}

void skip_annotations(const FileUnit& f, std::size_t& i) {
  while (f.is(i, "@") && !f.is(i + 1, "interface")) {
    ++i;
    while (f.ident(i) && f.is(i + 1, ".")) i += 2;
    if (f.tok(i).kind == TokenKind::Identifier) ++i;
    if (f.is(i, "(")) i = f.partner(i) + 1;
  }
}

bool parse_type(const FileUnit& f, std::size_t& i, TypeRef& out, bool allow_dims = true);

bool parse_type_args(const FileUnit& f, std::size_t& j, std::vector<TypeRef>& args) {
  ++j;  // '<'
  if (f.is(j, ">")) {
    ++j;
    return true;
  }
  for (;;) {
    skip_annotations(f, j);
    TypeRef arg;
    if (f.is(j, "?")) {
      arg.wildcard = true;
      ++j;
      if (f.is(j, "extends") || f.is(j, "super")) {
        ++j;
        TypeRef bound;
        if (!parse_type(f, j, bound)) return false;
        arg.args.push_back(std::move(bound));
      }
    } else if (!parse_type(f, j, arg)) {
      return false;
    }
    args.push_back(std::move(arg));
    if (f.is(j, ",")) {
      ++j;
      continue;
    }
    if (f.is(j, ">")) {
      ++j;
      return true;
    }
    return false;
  }
}

bool parse_type(const FileUnit& f, std::size_t& i, TypeRef& out, bool allow_dims) {
  std::size_t j = i;
  skip_annotations(f, j);
  const Token& t = f.tok(j);
  if (t.kind != TokenKind::Identifier) return false;
  TypeRef ref;
  if (t.text == "void") {
    ref.is_void = true;
    ref.names.push_back(t.text);
    ++j;
  } else if (java::is_primitive(t.text)) {
    ref.primitive = true;
    ref.names.push_back(t.text);
    ++j;
  } else {
    if (java::is_keyword(t.text)) return false;
    ref.names.push_back(t.text);
    ++j;
    for (;;) {
      if (f.is(j, "<")) {
        ref.args.clear();
        if (!parse_type_args(f, j, ref.args)) return false;
      }
      if (f.is(j, ".") && f.ident(j + 1)) {
        ref.names.push_back(f.tok(j + 1).text);
        j += 2;
        continue;
      }
      break;
    }
  }
  if (allow_dims) {
    while (f.is(j, "[") && f.is(j + 1, "]")) {
      ++ref.dims;
      j += 2;
    }
  }
  out = std::move(ref);
  i = j;
  return true;
}

struct TypeDecl;
struct Scope;

struct ExprType {
  std::string fqn;
  TypeDecl* decl = nullptr;
  int dims = 0;
  bool is_static = false;  // names a type rather than a value
  bool known() const { return !fqn.empty(); }
};

struct FieldDecl {
  EntityId id = kNoEntity;
  std::string name;
  TypeRef type;
  std::size_t init_begin = 0;
  std::size_t init_end = 0;
  bool enum_constant = false;
  std::size_t body_open = 0;
};

struct MethodDecl {
  EntityId id = kNoEntity;
  std::string name;
  bool ctor = false;
  bool varargs = false;
  std::vector<std::pair<TypeRef, std::string>> params;
  std::size_t param_count = 0;
  TypeRef ret;
  std::vector<TypeRef> throws;
  std::vector<std::string> type_params;
  std::vector<TypeRef> bounds;
  std::size_t body_open = 0;
};

enum class MemberKind { Field, Method, Initializer };

struct Member {
  MemberKind kind;
  std::size_t index;
};

struct TypeDecl {
  EntityId id = kNoEntity;
  EntityKind kind = EntityKind::Class;
  bool anonymous = false;
  bool processed = false;
  std::string name;
  std::string fqn;
  FileUnit* file = nullptr;
  TypeDecl* outer = nullptr;
  std::vector<std::string> type_params;
  std::vector<TypeRef> bounds;
  std::vector<TypeRef> extends;
  std::vector<TypeRef> implements;
  TypeRef anon_base;
  TypeDecl* anon_base_decl = nullptr;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  std::vector<std::size_t> initializers;
  std::vector<Member> members;
  std::vector<TypeDecl*> nested;
  int anon_count = 0;
  int local_count = 0;
  bool supers_done = false;
  std::vector<TypeDecl*> supers;
  std::string external_super;
  ExprType super_type;
  const Scope* creation_scope = nullptr;
};

struct Scope {
  FileUnit* file = nullptr;
  TypeDecl* type = nullptr;
  EntityId source = kNoEntity;
  const Scope* enclosing = nullptr;
  std::vector<std::string> type_vars;
  std::unordered_map<std::string, ExprType> locals;
  std::unordered_map<std::string, TypeDecl*> local_types;
  std::vector<TypeDecl*> created;

  Scope(FileUnit* f, TypeDecl* t, EntityId src, const Scope* enc)
      : file(f), type(t), source(src), enclosing(enc) {}
  Scope(const Scope&) = delete;
  Scope& operator=(const Scope&) = delete;
  ~Scope() {
    for (TypeDecl* t : created) t->creation_scope = nullptr;
  }

  const ExprType* find_local(const std::string& name) const {
    for (const Scope* s = this; s != nullptr; s = s->enclosing) {
      auto it = s->locals.find(name);
      if (it != s->locals.end()) return &it->second;
    }
    return nullptr;
  }
  TypeDecl* find_local_type(const std::string& name) const {
    for (const Scope* s = this; s != nullptr; s = s->enclosing) {
      auto it = s->local_types.find(name);
      if (it != s->local_types.end()) return it->second;
    }
    return nullptr;
  }
  bool is_type_var(const std::string& name) const {
    for (const Scope* s = this; s != nullptr; s = s->enclosing) {
      if (std::find(s->type_vars.begin(), s->type_vars.end(), name) != s->type_vars.end())
        return true;
      for (const TypeDecl* t = s->type; t != nullptr; t = t->outer)
        if (std::find(t->type_params.begin(), t->type_params.end(), name) != t->type_params.end())
          return true;
    }
    return false;
  }
};

struct PendingField {
  EntityId id = kNoEntity;
  std::string fqn;
};

struct Resolved {
  std::string fqn;
  TypeDecl* decl = nullptr;
  bool found = false;  // matched a declaration, an import, or java.lang
  bool type_var = false;
};

class Extractor {
 public:
  Extractor(std::string project_id, EntityId first_id)
      : project_id_(std::move(project_id)), next_id_(first_id) {}

  ProjectFacts run(std::vector<SourceFile> sources, std::vector<ExtractWarning> io_warnings) {
    std::sort(sources.begin(), sources.end(),
              [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
    facts_.project_id = project_id_;
    facts_.warnings = std::move(io_warnings);
    for (auto& src : sources) {
      java::LexResult lexed = java::lex(src.text);
      facts_.sloc += lexed.sloc;
      FileUnit& f = files_.emplace_back();
      f.path = src.path;
      f.tokens = std::move(lexed.tokens);
      compute_matches(f);
      if (lexed.unterminated_comment) warn(f, f.tok(f.end()).line, "unterminated block comment");
      for (std::size_t i = 0; i < f.end(); ++i)
        if (f.match[i] == f.end() && f.tokens[i].kind == TokenKind::Punct &&
            (f.tokens[i].text == "(" || f.tokens[i].text == "{" || f.tokens[i].text == "[")) {
          warn(f, f.tokens[i].line, "unbalanced '" + f.tokens[i].text + "'");
          break;
        }
      declare_file(f);
    }
    for (std::size_t i = 0; i < types_.size(); ++i) process_type(types_[i]);
    return std::move(facts_);
  }

 private:
  // ---- fact emission -------------------------------------------------------

  EntityId add_entity(EntityKind kind, std::string fqn, const FileUnit& f, std::uint32_t line,
                      EntityId parent) {
    const EntityId id = next_id_++;
    facts_.entities.push_back(SourceEntity{id, std::move(fqn), kind, project_id_, f.path, line});
    if (parent != kNoEntity)
      facts_.relations.push_back(
          FactRelation{parent, RelationKind::Contains, id, facts_.entities.back().fqn, {}});
    return id;
  }

  void add_relation(EntityId source, RelationKind kind, EntityId target, std::string fqn,
                    std::string owner = {}) {
    if (fqn.empty()) return;
    facts_.relations.push_back(
        FactRelation{source, kind, target, std::move(fqn), std::move(owner)});
  }

  void warn(const FileUnit& f, std::uint32_t line, std::string message) {
    facts_.warnings.push_back(
        ExtractWarning{ExtractWarning::Kind::ParseError, f.path, line, std::move(message)});
  }

  // ---- pass 1: declarations ------------------------------------------------

  void declare_file(FileUnit& f) {
    std::size_t i = 0;
    skip_annotations(f, i);
    if (f.is(i, "package")) {
      ++i;
      std::vector<std::string> parts;
      while (f.ident(i)) {
        parts.push_back(f.tok(i).text);
        ++i;
        if (!f.is(i, ".")) break;
        ++i;
      }
      f.package = join(parts, parts.size());
      while (i < f.end() && !f.is(i, ";")) ++i;
      ++i;
    }
    while (f.is(i, "import") || f.is(i, ";")) {
      if (f.is(i, ";")) {
        ++i;
        continue;
      }
      ++i;
      const bool is_static = f.is(i, "static");
      if (is_static) ++i;
      std::vector<std::string> parts;
      bool wildcard = false;
      while (i < f.end() && !f.is(i, ";")) {
        if (f.is(i, "*")) wildcard = true;
        else if (f.tok(i).kind == TokenKind::Identifier) parts.push_back(f.tok(i).text);
        ++i;
      }
      ++i;
      const std::string name = join(parts, parts.size());
      if (name.empty()) continue;
      if (is_static) (wildcard ? f.static_wildcards : f.static_imports).push_back(name);
      else (wildcard ? f.wildcard_imports : f.imports).push_back(name);
    }
    if (f.is(i, "module") || (f.is(i, "open") && f.is(i + 1, "module"))) return;

    const std::string pkg = f.package.empty() ? std::string(kDefaultPackage) : f.package;
    auto [it, fresh] = packages_.try_emplace(pkg, kNoEntity);
    if (fresh) it->second = add_entity(EntityKind::Package, pkg, f, f.tok(0).line, kNoEntity);
    f.package_id = it->second;

    while (i < f.end()) {
      if (f.is(i, ";")) {
        ++i;
        continue;
      }
      const std::size_t before = i;
      if (!declare_type(f, i, nullptr, f.package_id, nullptr)) {
        warn(f, f.tok(before).line, "unrecognized top-level declaration");
        i = skip_member(f, before);
      }
    }
  }

  // Advances past the next ';' or balanced '{...}', whichever comes first.
  static std::size_t skip_member(const FileUnit& f, std::size_t i) {
    const std::size_t start = i;
    while (i < f.end()) {
      if (f.is(i, ";")) return i + 1;
      if (f.is(i, "{")) return f.partner(i) + 1;
      if (f.is(i, "(") || f.is(i, "[")) {
        i = f.partner(i) + 1;
        continue;
      }
      if (f.is(i, "}") && i > start) return i;
      ++i;
    }
    return std::max(i, start + 1);
  }

  static std::size_t skip_modifiers(const FileUnit& f, std::size_t i, bool* is_default = nullptr) {
    static constexpr std::array<std::string_view, 14> kModifiers = {
        "public", "protected", "private", "static", "final", "abstract", "native",
        "synchronized", "transient", "volatile", "strictfp", "default", "sealed", "non"};
    for (;;) {
      skip_annotations(f, i);
      const Token& t = f.tok(i);
      if (t.kind != TokenKind::Identifier) return i;
      if (t.text == "non" && f.is(i + 1, "-") && f.is(i + 2, "sealed")) {
        i += 3;
        continue;
      }
      if (t.text == "sealed" && !f.ident(i + 1) && !f.is(i + 1, "class") &&
          !f.is(i + 1, "interface") && !f.is(i + 1, "abstract"))
        return i;
      if (t.text == "non" ||
          std::find(kModifiers.begin(), kModifiers.end(), t.text) == kModifiers.end())
        return i;
      if (t.text == "default" && is_default) *is_default = true;
      ++i;
    }
  }

  static bool at_type_keyword(const FileUnit& f, std::size_t i) {
    if (f.is(i, "class") || f.is(i, "interface") || f.is(i, "enum")) return f.ident(i + 1);
    if (f.is(i, "@") && f.is(i + 1, "interface")) return true;
    return f.is(i, "record") && f.ident(i + 1) && (f.is(i + 2, "(") || f.is(i + 2, "<"));
  }

  std::vector<std::string> parse_type_params(const FileUnit& f, std::size_t& i,
                                             std::vector<TypeRef>& bounds) {
    std::vector<std::string> names;
    if (!f.is(i, "<")) return names;
    ++i;
    while (i < f.end() && !f.is(i, ">")) {
      skip_annotations(f, i);
      if (!f.ident(i)) break;
      names.push_back(f.tok(i).text);
      ++i;
      if (f.is(i, "extends")) {
        do {
          ++i;
          TypeRef b;
          if (!parse_type(f, i, b)) break;
          bounds.push_back(std::move(b));
        } while (f.is(i, "&"));
      }
      if (f.is(i, ",")) ++i;
    }
    while (i < f.end() && !f.is(i, ">")) ++i;
    ++i;
    return names;
  }

  std::vector<TypeRef> parse_type_list(const FileUnit& f, std::size_t& i) {
    std::vector<TypeRef> out;
    for (;;) {
      TypeRef t;
      if (!parse_type(f, i, t)) break;
      out.push_back(std::move(t));
      if (!f.is(i, ",")) break;
      ++i;
    }
    return out;
  }

  // Parses modifiers + a class/interface/enum/record/@interface declaration at
  // i. Returns false (leaving i untouched) when no type declaration starts here.
  // When `local` is set the type is a local class of that method scope.
  TypeDecl* declare_type(FileUnit& f, std::size_t& i, TypeDecl* outer, EntityId parent,
                         const Scope* local) {
    std::size_t j = skip_modifiers(f, i);
    if (!at_type_keyword(f, j)) return nullptr;
    EntityKind kind = EntityKind::Class;
    bool record = false;
    if (f.is(j, "interface")) kind = EntityKind::Interface;
    else if (f.is(j, "enum")) kind = EntityKind::Enum;
    else if (f.is(j, "@")) {
      kind = EntityKind::Annotation;
      ++j;
    } else if (f.is(j, "record")) {
      record = true;
    }
    ++j;
    if (!f.ident(j)) return nullptr;
    const std::uint32_t line = f.tok(j).line;
    TypeDecl& t = types_.emplace_back();
    t.kind = kind;
    t.name = f.tok(j).text;
    t.file = &f;
    t.outer = outer;
    if (local != nullptr) {
      t.fqn = outer->fqn + "$" + std::to_string(++outer->local_count) + t.name;
      t.creation_scope = local;
    } else if (outer != nullptr) {
      t.fqn = outer->fqn + "." + t.name;
    } else {
      t.fqn = f.package.empty() ? t.name : f.package + "." + t.name;
    }
    t.id = add_entity(kind, t.fqn, f, line, parent);
    if (local == nullptr) by_fqn_.try_emplace(t.fqn, &t);
    if (outer != nullptr && local == nullptr) outer->nested.push_back(&t);
    ++j;
    t.type_params = parse_type_params(f, j, t.bounds);
    if (record && f.is(j, "(")) {
      const std::size_t close = f.partner(j);
      ++j;
      while (j < close) {
        std::size_t k = skip_modifiers(f, j);
        TypeRef type;
        if (!parse_type(f, k, type)) break;
        if (f.is(k, "...")) {
          ++k;
          ++type.dims;
        }
        if (!f.ident(k)) break;
        FieldDecl fd;
        fd.name = f.tok(k).text;
        fd.type = std::move(type);
        fd.id = add_entity(EntityKind::Field, t.fqn + "." + fd.name, f, f.tok(k).line, t.id);
        t.members.push_back({MemberKind::Field, t.fields.size()});
        t.fields.push_back(std::move(fd));
        j = k + 1;
        if (f.is(j, ",")) ++j;
      }
      j = close + 1;
    }
    for (;;) {
      if (f.is(j, "extends")) {
        ++j;
        t.extends = parse_type_list(f, j);
      } else if (f.is(j, "implements")) {
        ++j;
        t.implements = parse_type_list(f, j);
      } else if (f.is(j, "permits")) {
        ++j;
        parse_type_list(f, j);
      } else {
        break;
      }
    }
    if (!f.is(j, "{")) {
      warn(f, line, "type " + t.fqn + " has no body");
      i = skip_member(f, j);
      return &t;
    }
    declare_body(f, j, t);
    i = f.partner(j) + 1;
    return &t;
  }

  static std::size_t initializer_end(const FileUnit& f, std::size_t i, std::size_t limit) {
    while (i < limit) {
      if (f.is(i, ",") || f.is(i, ";")) return i;
      if (f.is(i, "(") || f.is(i, "[") || f.is(i, "{")) {
        i = f.partner(i) + 1;
        continue;
      }
      if (f.is(i, "new")) {
        std::size_t k = i + 1;
        TypeRef skipped;
        if (parse_type(f, k, skipped, false)) {
          i = k;
          continue;
        }
      }
      ++i;
    }
    return limit;
  }

  void declare_enum_constants(FileUnit& f, std::size_t& i, std::size_t close, TypeDecl& t) {
    while (i < close) {
      skip_annotations(f, i);
      if (f.is(i, ";")) {
        ++i;
        return;
      }
      if (!f.ident(i)) return;
      if (!(f.is(i + 1, "(") || f.is(i + 1, ",") || f.is(i + 1, ";") || f.is(i + 1, "{") ||
            f.is(i + 1, "}")))
        return;
      FieldDecl fd;
      fd.enum_constant = true;
      fd.name = f.tok(i).text;
      fd.id = add_entity(EntityKind::Field, t.fqn + "." + fd.name, f, f.tok(i).line, t.id);
      ++i;
      if (f.is(i, "(")) {
        fd.init_begin = i + 1;
        fd.init_end = f.partner(i);
        i = fd.init_end + 1;
      }
      if (f.is(i, "{")) {
        fd.body_open = i;
        i = f.partner(i) + 1;
      }
      t.members.push_back({MemberKind::Field, t.fields.size()});
      t.fields.push_back(std::move(fd));
      if (f.is(i, ",")) ++i;
    }
  }

  void declare_body(FileUnit& f, std::size_t open, TypeDecl& t) {
    const std::size_t close = f.partner(open);
    std::size_t i = open + 1;
    if (t.kind == EntityKind::Enum) declare_enum_constants(f, i, close, t);
    while (i < close) {
      if (f.is(i, ";")) {
        ++i;
        continue;
      }
      const std::size_t start = i;
      if (declare_type(f, i, &t, t.id, nullptr) != nullptr) continue;
      bool is_default = false;
      std::size_t j = skip_modifiers(f, i, &is_default);
      if (f.is(j, "{")) {
        t.members.push_back({MemberKind::Initializer, t.initializers.size()});
        t.initializers.push_back(j);
        i = f.partner(j) + 1;
        continue;
      }
      if (!declare_member(f, j, t)) {
        warn(f, f.tok(start).line, "skipped unparseable member in " + t.fqn);
        j = skip_member(f, start);
      }
      i = std::max(j, start + 1);
    }
  }

  // Method, constructor, or field declaration(s) starting after the modifiers.
  bool declare_member(FileUnit& f, std::size_t& i, TypeDecl& t) {
    std::vector<TypeRef> bounds;
    std::vector<std::string> type_params = parse_type_params(f, i, bounds);
    skip_annotations(f, i);
    const bool record = t.kind == EntityKind::Class && f.is(i + 1, "{") && f.is(i, t.name);
    if ((f.is(i, t.name) && f.is(i + 1, "(")) || record) {
      MethodDecl m;
      m.ctor = true;
      m.name = "<init>";
      m.type_params = std::move(type_params);
      m.bounds = std::move(bounds);
      const std::uint32_t line = f.tok(i).line;
      ++i;
      if (!record && !parse_params(f, i, m)) return false;
      finish_method(f, i, m);
      m.id = add_entity(EntityKind::Constructor, t.fqn + ".<init>", f, line, t.id);
      t.members.push_back({MemberKind::Method, t.methods.size()});
      t.methods.push_back(std::move(m));
      return true;
    }
    TypeRef type;
    if (!parse_type(f, i, type)) return false;
    if (!f.ident(i)) return false;
    if (f.is(i + 1, "(")) {
      MethodDecl m;
      m.name = f.tok(i).text;
      m.ret = std::move(type);
      m.type_params = std::move(type_params);
      m.bounds = std::move(bounds);
      const std::uint32_t line = f.tok(i).line;
      ++i;
      if (!parse_params(f, i, m)) return false;
      while (f.is(i, "[") && f.is(i + 1, "]")) {
        ++m.ret.dims;
        i += 2;
      }
      finish_method(f, i, m);
      m.id = add_entity(EntityKind::Method, t.fqn + "." + m.name, f, line, t.id);
      t.members.push_back({MemberKind::Method, t.methods.size()});
      t.methods.push_back(std::move(m));
      return true;
    }
    for (;;) {
      if (!f.ident(i)) return false;
      FieldDecl fd;
      fd.name = f.tok(i).text;
      fd.type = type;
      const std::uint32_t line = f.tok(i).line;
      ++i;
      while (f.is(i, "[") && f.is(i + 1, "]")) {
        ++fd.type.dims;
        i += 2;
      }
      if (f.is(i, "=")) {
        fd.init_begin = i + 1;
        fd.init_end = initializer_end(f, i + 1, f.end());
        i = fd.init_end;
      }
      fd.id = add_entity(EntityKind::Field, t.fqn + "." + fd.name, f, line, t.id);
      t.members.push_back({MemberKind::Field, t.fields.size()});
      t.fields.push_back(std::move(fd));
      if (f.is(i, ",")) {
        ++i;
        continue;
      }
      if (f.is(i, ";")) {
        ++i;
        return true;
      }
      // Tolerate a missing ';' before the next member.
      return true;
    }
  }

  bool parse_params(const FileUnit& f, std::size_t& i, MethodDecl& m) {
    if (!f.is(i, "(")) return true;
    const std::size_t close = f.partner(i);
    if (!f.is(close, ")")) return false;
    std::size_t j = i + 1;
    while (j < close) {
      std::size_t k = skip_modifiers(f, j);
      TypeRef type;
      if (!parse_type(f, k, type)) break;
      if (f.is(k, "...")) {
        ++type.dims;
        m.varargs = true;
        ++k;
      }
      if (f.is(k, "this")) {  // receiver parameter
        j = k + 1;
        if (f.is(j, ",")) ++j;
        continue;
      }
      if (!f.ident(k)) break;
      std::string name = f.tok(k).text;
      ++k;
      while (f.is(k, "[") && f.is(k + 1, "]")) {
        ++type.dims;
        k += 2;
      }
      m.params.emplace_back(std::move(type), std::move(name));
      j = k;
      if (f.is(j, ",")) ++j;
    }
    m.param_count = m.params.size();
    if (m.params.empty() && close > i + 1) m.param_count = 1 + count_commas(f, i + 1, close);
    i = close + 1;
    return true;
  }

  void finish_method(const FileUnit& f, std::size_t& i, MethodDecl& m) {
    if (f.is(i, "throws")) {
      ++i;
      m.throws = parse_type_list(f, i);
    }
    if (f.is(i, "{")) {
      m.body_open = i;
      i = f.partner(i) + 1;
      return;
    }
    if (f.is(i, "default")) {  // annotation element default value
      while (i < f.end() && !f.is(i, ";")) {
        if (f.is(i, "(") || f.is(i, "{") || f.is(i, "[")) i = f.partner(i);
        ++i;
      }
    }
    if (f.is(i, ";")) ++i;
  }

  static std::size_t count_commas(const FileUnit& f, std::size_t begin, std::size_t end) {
    std::size_t n = 0;
    for (std::size_t i = begin; i < end; ++i) {
      if (f.is(i, "(") || f.is(i, "[") || f.is(i, "{")) {
        i = f.partner(i);
        continue;
      }
      if (f.is(i, ",")) ++n;
    }
    return n;
  }

  // ---- name resolution -----------------------------------------------------

  TypeDecl* internal(const std::string& fqn) const {
    auto it = by_fqn_.find(fqn);
    return it == by_fqn_.end() ? nullptr : it->second;
  }

  TypeDecl* member_type(TypeDecl* t, const std::string& name, int depth = 0) {
    if (t == nullptr || depth > kMaxHierarchyDepth) return nullptr;
    for (TypeDecl* n : t->nested)
      if (n->name == name) return n;
    ensure_supers(*t);
    for (TypeDecl* s : t->supers)
      if (TypeDecl* m = member_type(s, name, depth + 1)) return m;
    return nullptr;
  }

  Resolved resolve_simple(const std::string& name, const Scope& sc) {
    Resolved r;
    if (sc.is_type_var(name)) {
      r.type_var = true;
      r.found = true;
      return r;
    }
    auto hit = [&](TypeDecl* d) {
      r.decl = d;
      r.fqn = d->fqn;
      r.found = true;
      return r;
    };
    if (TypeDecl* d = sc.find_local_type(name)) return hit(d);
    for (const Scope* s = &sc; s != nullptr; s = s->enclosing) {
      for (TypeDecl* t = s->type; t != nullptr; t = t->outer) {
        if (!t->anonymous && t->name == name) return hit(t);
        if (TypeDecl* m = member_type(t, name)) return hit(m);
      }
    }
    const FileUnit& f = *sc.file;
    for (const auto& imp : f.imports) {
      const auto dot = imp.rfind('.');
      if (imp.compare(dot == std::string::npos ? 0 : dot + 1, std::string::npos, name) == 0) {
        if (TypeDecl* d = internal(imp)) return hit(d);
        r.fqn = imp;
        r.found = true;
        return r;
      }
    }
    if (TypeDecl* d = internal(f.package.empty() ? name : f.package + "." + name)) return hit(d);
    std::vector<std::string> outside;
    for (const auto& w : f.wildcard_imports) {
      if (TypeDecl* d = internal(w + "." + name)) return hit(d);
      if (!packages_.contains(w) && !internal(w)) outside.push_back(w);
    }
    if (in_java_lang(name)) {
      r.fqn = "java.lang." + name;
      r.found = true;
      return r;
    }
    if (outside.size() == 1) {
      r.fqn = outside.front() + "." + name;
      r.found = true;
      return r;
    }
    r.fqn = name;  // unresolved: keep the simple name
    return r;
  }

  Resolved resolve(const TypeRef& ref, const Scope& sc) {
    Resolved r;
    if (ref.names.empty() || ref.primitive || ref.is_void || ref.wildcard) return r;
    if (ref.names.size() == 1) return resolve_simple(ref.names[0], sc);
    Resolved head = resolve_simple(ref.names[0], sc);
    if (head.found && !head.type_var) {
      TypeDecl* d = head.decl;
      std::string fqn = head.fqn;
      for (std::size_t k = 1; k < ref.names.size(); ++k) {
        TypeDecl* next = d ? member_type(d, ref.names[k]) : nullptr;
        fqn = next ? next->fqn : fqn + "." + ref.names[k];
        d = next;
      }
      r.fqn = fqn;
      r.decl = d;
      r.found = true;
      return r;
    }
    r.fqn = join(ref.names, ref.names.size());
    r.decl = internal(r.fqn);
    r.found = true;
    return r;
  }

  ExprType expr_type(const TypeRef& ref, const Scope& sc) {
    ExprType e;
    if (ref.primitive) {
      if (ref.dims > 0) e.fqn = ref.names[0];
      e.dims = ref.dims;
      return e;
    }
    Resolved r = resolve(ref, sc);
    if (r.type_var) return e;
    e.fqn = r.fqn;
    e.decl = r.decl;
    e.dims = ref.dims;
    return e;
  }

  void ensure_supers(TypeDecl& t) {
    if (t.supers_done) return;
    t.supers_done = true;
    Scope sc(t.file, t.outer, t.id, t.creation_scope);
    sc.type_vars = t.type_params;
    auto note = [&](const TypeRef& ref, bool is_class_extends) {
      Resolved r = resolve(ref, sc);
      if (r.decl != nullptr && r.decl != &t) t.supers.push_back(r.decl);
      if (is_class_extends) {
        t.super_type = ExprType{r.fqn, r.decl, 0, false};
        if (r.decl == nullptr && !r.fqn.empty() && r.fqn != "java.lang.Object")
          t.external_super = r.fqn;
      }
    };
    if (t.anonymous) {
      if (t.anon_base_decl != nullptr) {
        t.supers.push_back(t.anon_base_decl);
        t.super_type = ExprType{t.anon_base_decl->fqn, t.anon_base_decl, 0, false};
      } else {
        note(t.anon_base, true);
      }
    }
    const bool is_class = t.kind == EntityKind::Class || t.kind == EntityKind::Enum;
    for (const auto& e : t.extends) note(e, is_class);
    for (const auto& e : t.implements) note(e, false);
    if (!t.super_type.known()) t.super_type.fqn = "java.lang.Object";
  }

  std::pair<FieldDecl*, TypeDecl*> find_field(TypeDecl* t, const std::string& name,
                                              int depth = 0) {
    if (t == nullptr || depth > kMaxHierarchyDepth) return {nullptr, nullptr};
    for (auto& fd : t->fields)
      if (fd.name == name) return {&fd, t};
    ensure_supers(*t);
    for (TypeDecl* s : t->supers) {
      auto hit = find_field(s, name, depth + 1);
      if (hit.first) return hit;
    }
    return {nullptr, nullptr};
  }

  std::pair<MethodDecl*, TypeDecl*> find_method(TypeDecl* t, const std::string& name,
                                                std::size_t argc, bool exact, int depth = 0) {
    if (t == nullptr || depth > kMaxHierarchyDepth) return {nullptr, nullptr};
    for (auto& m : t->methods) {
      if (m.ctor || m.name != name) continue;
      if (!exact || m.param_count == argc || (m.varargs && argc + 1 >= m.param_count))
        return {&m, t};
    }
    ensure_supers(*t);
    for (TypeDecl* s : t->supers) {
      auto hit = find_method(s, name, argc, exact, depth + 1);
      if (hit.first) return hit;
    }
    return {nullptr, nullptr};
  }

  MethodDecl* find_ctor(TypeDecl* t, std::size_t argc) {
    MethodDecl* any = nullptr;
    for (auto& m : t->methods) {
      if (!m.ctor) continue;
      if (m.param_count == argc || (m.varargs && argc + 1 >= m.param_count)) return &m;
      if (any == nullptr) any = &m;
    }
    return any;
  }

  std::string external_super_of(TypeDecl* t, int depth = 0) {
    if (t == nullptr || depth > kMaxHierarchyDepth) return {};
    ensure_supers(*t);
    if (!t->external_super.empty()) return t->external_super;
    for (TypeDecl* s : t->supers) {
      std::string e = external_super_of(s, depth + 1);
      if (!e.empty()) return e;
    }
    return {};
  }

  ExprType field_type(FieldDecl& fd, TypeDecl* owner) {
    if (fd.enum_constant) return ExprType{owner->fqn, owner, 0, false};
    Scope sc(owner->file, owner, owner->id, owner->creation_scope);
    return expr_type(fd.type, sc);
  }

  ExprType return_type(MethodDecl& m, TypeDecl* owner) {
    Scope sc(owner->file, owner, owner->id, owner->creation_scope);
    sc.type_vars = m.type_params;
    return expr_type(m.ret, sc);
  }

  // ---- pass 2: relations ---------------------------------------------------

  void emit_type(const TypeRef& ref, EntityId source, RelationKind kind, const Scope& sc) {
    if (ref.wildcard) {
      for (const auto& a : ref.args) emit_type(a, source, RelationKind::Uses, sc);
      return;
    }
    if (ref.primitive) {
      if (kind == RelationKind::Holds) add_relation(source, kind, kNoEntity, boxed(ref.names[0]));
      return;
    }
    if (ref.is_void) return;
    Resolved r = resolve(ref, sc);
    if (!r.type_var) add_relation(source, kind, r.decl ? r.decl->id : kNoEntity, r.fqn);
    for (const auto& a : ref.args) emit_type(a, source, RelationKind::Uses, sc);
  }

  void process_type(TypeDecl& t) {
    if (t.processed) return;
    t.processed = true;
    ensure_supers(t);
    FileUnit& f = *t.file;
    Scope ts(&f, &t, t.id, t.creation_scope);
    if (t.anonymous) {
      if (t.anon_base_decl != nullptr) {
        add_relation(t.id, RelationKind::Extends, t.anon_base_decl->id, t.anon_base_decl->fqn);
      } else {
        const Scope* cs = t.creation_scope != nullptr ? t.creation_scope : &ts;
        Resolved r = resolve(t.anon_base, *cs);
        const bool iface = r.decl != nullptr && (r.decl->kind == EntityKind::Interface ||
                                                 r.decl->kind == EntityKind::Annotation);
        if (!r.type_var && r.fqn != "java.lang.Object")
          add_relation(t.id, iface ? RelationKind::Implements : RelationKind::Extends,
                       r.decl ? r.decl->id : kNoEntity, r.fqn);
        for (const auto& a : t.anon_base.args) emit_type(a, t.id, RelationKind::Uses, *cs);
      }
    }
    {
      Scope header(&f, t.outer, t.id, t.creation_scope);
      header.type_vars = t.type_params;
      for (const auto& e : t.extends) emit_type(e, t.id, RelationKind::Extends, header);
      for (const auto& e : t.implements) emit_type(e, t.id, RelationKind::Implements, header);
      for (const auto& b : t.bounds) emit_type(b, t.id, RelationKind::Uses, header);
    }
    for (const Member& m : t.members) {
      switch (m.kind) {
        case MemberKind::Field: process_field(t, t.fields[m.index]); break;
        case MemberKind::Method: process_method(t, t.methods[m.index]); break;
        case MemberKind::Initializer: {
          const std::size_t open = t.initializers[m.index];
          Scope is(&f, &t, t.id, t.creation_scope);
          scan(open + 1, f.partner(open), is);
          break;
        }
      }
    }
  }

  void process_field(TypeDecl& t, FieldDecl& fd) {
    FileUnit& f = *t.file;
    Scope fs(&f, &t, fd.id, t.creation_scope);
    if (fd.enum_constant) {
      add_relation(fd.id, RelationKind::Holds, t.id, t.fqn);
      if (fd.init_end > fd.init_begin) scan(fd.init_begin, fd.init_end, fs);
      if (fd.body_open != 0) declare_anonymous(fs, TypeRef{}, &t, fd.body_open);
      return;
    }
    emit_type(fd.type, fd.id, RelationKind::Holds, fs);
    if (fd.init_end > fd.init_begin) scan(fd.init_begin, fd.init_end, fs);
  }

  void process_method(TypeDecl& t, MethodDecl& m) {
    FileUnit& f = *t.file;
    Scope ms(&f, &t, m.id, t.creation_scope);
    ms.type_vars = m.type_params;
    for (const auto& b : m.bounds) emit_type(b, m.id, RelationKind::Uses, ms);
    if (!m.ctor) emit_type(m.ret, m.id, RelationKind::Uses, ms);
    for (const auto& [type, name] : m.params) {
      emit_type(type, m.id, RelationKind::Uses, ms);
      ms.locals[name] = expr_type(type, ms);
    }
    for (const auto& e : m.throws) emit_type(e, m.id, RelationKind::Uses, ms);
    if (m.body_open != 0) scan(m.body_open + 1, f.partner(m.body_open), ms);
  }

  // Creates the anonymous class whose body opens at `open` and processes it
  // immediately. Either base_ref or base_decl names the supertype.
  void declare_anonymous(Scope& sc, const TypeRef& base_ref, TypeDecl* base_decl,
                         std::size_t open) {
    FileUnit& f = *sc.file;
    TypeDecl* host = sc.type;
    TypeDecl& t = types_.emplace_back();
    const std::size_t first_new = types_.size() - 1;
    t.anonymous = true;
    t.kind = EntityKind::Class;
    t.file = &f;
    t.outer = host;
    t.fqn = host->fqn + "$" + std::to_string(++host->anon_count);
    t.anon_base = base_ref;
    t.anon_base_decl = base_decl;
    t.creation_scope = &sc;
    sc.created.push_back(&t);
    t.id = add_entity(EntityKind::Class, t.fqn, f, f.tok(open).line, sc.source);
    declare_body(f, open, t);
    process_new_types(first_new);
  }

  void process_new_types(std::size_t first) {
    const std::size_t last = types_.size();
    for (std::size_t k = first; k < last; ++k) process_type(types_[k]);
  }

  static bool statement_start(const FileUnit& f, std::size_t i, std::size_t begin) {
    if (i <= begin) return true;
    const Token& p = f.tok(i - 1);
    if (p.kind != TokenKind::Punct) return false;
    if (p.text == "{" || p.text == "}" || p.text == ";" || p.text == ":") return true;
    if (p.text == "(" && i >= 2)
      return f.is(i - 2, "for") || f.is(i - 2, "try");
    return false;
  }

  // Local variable declaration(s) at a statement start. Returns the index just
  // past the first declared name, or i when no declaration starts here.
  std::size_t try_local_decl(std::size_t i, std::size_t end, Scope& sc) {
    const FileUnit& f = *sc.file;
    std::size_t j = i;
    for (;;) {
      skip_annotations(f, j);
      if (!f.is(j, "final")) break;
      ++j;
    }
    if (f.is(j, "var") && f.ident(j + 1) && (f.is(j + 2, "=") || f.is(j + 2, ":"))) {
      ExprType inferred;
      if (f.is(j + 2, "=") && f.is(j + 3, "new")) {
        std::size_t k = j + 4;
        TypeRef created;
        if (parse_type(f, k, created, false)) inferred = expr_type(created, sc);
      }
      sc.locals[f.tok(j + 1).text] = inferred;
      return j + 2;
    }
    TypeRef type;
    std::size_t k = j;
    if (!parse_type(f, k, type) || type.is_void) return i;
    if (!f.ident(k)) return i;
    if (!(f.is(k + 1, "=") || f.is(k + 1, ";") || f.is(k + 1, ",") || f.is(k + 1, ":") ||
          f.is(k + 1, ")") || f.is(k + 1, "[")))
      return i;
    if (!type.primitive && java::is_keyword(type.names[0])) return i;
    emit_type(type, sc.source, RelationKind::Uses, sc);
    const ExprType et = expr_type(type, sc);
    sc.locals[f.tok(k).text] = et;
    // Further declarators of the same statement.
    std::size_t p = k + 1;
    while (p < end) {
      if (f.is(p, ";") || f.is(p, ")") || f.is(p, "{") || f.is(p, "}")) break;
      if (f.is(p, "(") || f.is(p, "[")) {
        p = f.partner(p) + 1;
        continue;
      }
      if (f.is(p, ",") && f.ident(p + 1) &&
          (f.is(p + 2, "=") || f.is(p + 2, ",") || f.is(p + 2, ";") || f.is(p + 2, "[")))
        sc.locals[f.tok(p + 1).text] = et;
      ++p;
    }
    return k + 1;
  }

  // '(' at i: lambda parameter list, catch clause, or cast. Returns the index
  // to continue from, or i when none applies.
  std::size_t try_paren(std::size_t i, Scope& sc) {
    const FileUnit& f = *sc.file;
    const std::size_t close = f.partner(i);
    if (f.is(close + 1, "->")) {
      for (std::size_t k = i + 1; k < close; ++k)
        if (f.ident(k) && (f.is(k + 1, ",") || f.is(k + 1, ")"))) sc.locals[f.tok(k).text] = {};
      return close + 1;
    }
    if (i > 0 && f.is(i - 1, "catch")) {
      std::size_t k = skip_modifiers(f, i + 1);
      ExprType first;
      bool have_first = false;
      for (;;) {
        TypeRef type;
        if (!parse_type(f, k, type)) break;
        emit_type(type, sc.source, RelationKind::Uses, sc);
        if (!have_first) {
          first = expr_type(type, sc);
          have_first = true;
        }
        if (!f.is(k, "|")) break;
        ++k;
      }
      if (f.ident(k)) sc.locals[f.tok(k).text] = first;
      return close + 1;
    }
    if (i > 0) {
      const Token& prev = f.tok(i - 1);
      if (prev.kind == TokenKind::Identifier) {
        static constexpr std::array<std::string_view, 7> kControl = {
            "if", "while", "for", "switch", "catch", "synchronized", "try"};
        if (!java::is_keyword(prev.text) ||
            std::find(kControl.begin(), kControl.end(), prev.text) != kControl.end())
          return i;
        if (prev.text == "this" || prev.text == "super") return i;
      } else if (prev.kind == TokenKind::Punct && (prev.text == ")" || prev.text == "]")) {
        return i;
      }
    }
    std::size_t k = i + 1;
    TypeRef type;
    if (!parse_type(f, k, type) || k != close || type.is_void) return i;
    if (!type.primitive && java::is_keyword(type.names[0])) return i;
    const Token& next = f.tok(close + 1);
    bool operand = false;
    switch (next.kind) {
      case TokenKind::Identifier:
        operand = !java::is_keyword(next.text) || next.text == "this" || next.text == "super" ||
                  next.text == "new" || next.text == "true" || next.text == "false" ||
                  next.text == "null";
        break;
      case TokenKind::Number:
      case TokenKind::String:
      case TokenKind::Char: operand = true; break;
      case TokenKind::Punct:
        operand = next.text == "(" || next.text == "!" || next.text == "~" ||
                  (type.primitive && type.dims == 0 &&
                   (next.text == "+" || next.text == "-" || next.text == "++" ||
                    next.text == "--"));
        break;
      case TokenKind::End: break;
    }
    if (!operand) return i;
    if (!type.primitive || type.dims > 0) {
      if (type.primitive) {
        add_relation(sc.source, RelationKind::Casts, kNoEntity, type.names[0]);
      } else {
        emit_type(type, sc.source, RelationKind::Casts, sc);
      }
    }
    return close + 1;
  }

  void scan(std::size_t begin, std::size_t end, Scope& sc) {
    FileUnit& f = *sc.file;
    std::size_t i = begin;
    while (i < end) {
      const Token& t = f.tok(i);
      if (t.kind == TokenKind::End) return;
      if (statement_start(f, i, begin) &&
          (t.kind == TokenKind::Identifier || f.is(i, "@"))) {
        if (TypeDecl* local = try_local_type(i, sc)) {
          (void)local;
          continue;
        }
        const std::size_t after = try_local_decl(i, end, sc);
        if (after != i) {
          i = after;
          continue;
        }
      }
      if (t.kind == TokenKind::Punct) {
        if (t.text == "(") {
          const std::size_t next = try_paren(i, sc);
          i = next != i ? next : i + 1;
        } else if (t.text == "@") {
          std::size_t k = i;
          skip_annotations(f, k);
          i = std::max(k, i + 1);
        } else {
          ++i;
        }
        continue;
      }
      if (t.kind != TokenKind::Identifier) {
        ++i;
        continue;
      }
      if (t.text == "new") {
        i = scan_creator(i, end, sc);
      } else if (t.text == "instanceof") {
        std::size_t k = i + 1;
        if (f.is(k, "final")) ++k;
        TypeRef type;
        if (parse_type(f, k, type)) {
          emit_type(type, sc.source, RelationKind::Instanceof, sc);
          if (f.ident(k)) {
            sc.locals[f.tok(k).text] = expr_type(type, sc);
            ++k;
          }
        }
        i = std::max(k, i + 1);
      } else if (t.text == "this" || t.text == "super" || !java::is_keyword(t.text)) {
        if (f.is(i + 1, "->") && !(i > 0 && f.is(i - 1, "case"))) {
          sc.locals[t.text] = {};
          i += 2;
          continue;
        }
        i = scan_chain(i, end, sc);
      } else {
        ++i;
      }
    }
  }

  TypeDecl* try_local_type(std::size_t& i, Scope& sc) {
    FileUnit& f = *sc.file;
    const std::size_t j = skip_modifiers(f, i);
    if (!at_type_keyword(f, j) || f.is(j, "@")) return nullptr;
    const std::size_t first_new = types_.size();
    std::size_t k = i;
    TypeDecl* t = declare_type(f, k, sc.type, sc.source, &sc);
    if (t == nullptr) return nullptr;
    sc.created.push_back(t);
    sc.local_types[t->name] = t;
    i = std::max(k, i + 1);
    process_new_types(first_new);
    return t;
  }

  std::size_t scan_args(std::size_t open, Scope& sc, std::size_t* argc) {
    const FileUnit& f = *sc.file;
    const std::size_t close = f.partner(open);
    if (argc != nullptr) *argc = close > open + 1 ? 1 + count_commas(f, open + 1, close) : 0;
    scan(open + 1, close, sc);
    return close + 1;
  }

  std::size_t scan_creator(std::size_t i, std::size_t end, Scope& sc) {
    FileUnit& f = *sc.file;
    std::size_t j = i + 1;
    if (f.is(j, "<")) {
      std::vector<TypeRef> ignored;
      parse_type_args(f, j, ignored);
    }
    TypeRef type;
    if (!parse_type(f, j, type, false)) return i + 1;
    if (f.is(j, "[") || f.is(j, "{")) {
      if (!type.primitive) emit_type(type, sc.source, RelationKind::Uses, sc);
      return j;
    }
    if (!f.is(j, "(")) return j;
    const Resolved r = resolve(type, sc);
    std::size_t argc = 0;
    const std::size_t close = f.partner(j);
    argc = close > j + 1 ? 1 + count_commas(f, j + 1, close) : 0;
    if (!r.type_var && !r.fqn.empty()) {
      MethodDecl* ctor = r.decl ? find_ctor(r.decl, argc) : nullptr;
      add_relation(sc.source, RelationKind::Instantiates, ctor ? ctor->id : kNoEntity,
                   r.fqn + ".<init>", r.fqn);
    }
    for (const auto& a : type.args) emit_type(a, sc.source, RelationKind::Uses, sc);
    j = scan_args(j, sc, nullptr);
    if (f.is(j, "{")) {
      declare_anonymous(sc, type, nullptr, j);
      j = f.partner(j) + 1;
    }
    ExprType cur{r.fqn, r.decl, 0, false};
    if (r.type_var) cur = {};
    return continue_chain(j, end, sc, cur, r.fqn, false);
  }

  void flush_read(EntityId source, PendingField& p) {
    if (p.id != kNoEntity) add_relation(source, RelationKind::Reads, p.id, p.fqn);
    p = {};
  }

  // Method call at `open` ('(' after the name). receiver == nullptr means an
  // unqualified call.
  ExprType emit_call(const ExprType* receiver, const std::string& receiver_text,
                     const std::string& name, std::size_t open, Scope& sc, std::size_t& next) {
    std::size_t argc = 0;
    next = scan_args(open, sc, &argc);
    std::pair<MethodDecl*, TypeDecl*> hit{nullptr, nullptr};
    std::string owner;
    if (receiver == nullptr) {
      for (const Scope* s = &sc; s != nullptr && !hit.first; s = s->enclosing)
        for (TypeDecl* t = s->type; t != nullptr && !hit.first; t = t->outer) {
          hit = find_method(t, name, argc, true);
          if (!hit.first) hit = find_method(t, name, argc, false);
        }
      if (!hit.first) {
        for (const auto& imp : sc.file->static_imports) {
          const auto dot = imp.rfind('.');
          if (dot != std::string::npos && imp.compare(dot + 1, std::string::npos, name) == 0) {
            owner = imp.substr(0, dot);
            break;
          }
        }
        if (owner.empty() && sc.file->static_wildcards.size() == 1)
          owner = sc.file->static_wildcards.front();
        if (owner.empty()) owner = external_super_of(sc.type);
      }
    } else if (receiver->decl != nullptr && receiver->dims == 0) {
      hit = find_method(receiver->decl, name, argc, true);
      if (!hit.first) hit = find_method(receiver->decl, name, argc, false);
      if (!hit.first) {
        owner = external_super_of(receiver->decl);
        if (owner.empty()) owner = receiver->fqn;
      }
    } else if (receiver->known() && receiver->dims == 0) {
      owner = receiver->fqn;
    }
    if (hit.first != nullptr) {
      add_relation(sc.source, RelationKind::Calls, hit.first->id, hit.second->fqn + "." + name,
                   hit.second->fqn);
      return return_type(*hit.first, hit.second);
    }
    std::string target;
    if (!owner.empty()) target = owner + "." + name;
    else if (!receiver_text.empty()) target = receiver_text + "." + name;
    else target = name;
    add_relation(sc.source, RelationKind::Calls, kNoEntity, std::move(target), std::move(owner));
    return {};
  }

  std::size_t scan_chain(std::size_t i, std::size_t end, Scope& sc) {
    FileUnit& f = *sc.file;
    const std::string& name = f.tok(i).text;
    const bool prefix_update = i > 0 && (f.is(i - 1, "++") || f.is(i - 1, "--"));
    ExprType cur;
    std::string text;
    PendingField field;
    bool type_qualifier = false;
    std::size_t j = i + 1;

    if (name == "this" || name == "super") {
      TypeDecl* self = sc.type;
      if (f.is(j, "(")) {  // explicit constructor invocation
        std::size_t argc = 0;
        const std::size_t next = scan_args(j, sc, &argc);
        if (name == "this") {
          MethodDecl* ctor = find_ctor(self, argc);
          add_relation(sc.source, RelationKind::Calls, ctor ? ctor->id : kNoEntity,
                       self->fqn + ".<init>", self->fqn);
        } else {
          ensure_supers(*self);
          const ExprType& st = self->super_type;
          MethodDecl* ctor = st.decl ? find_ctor(st.decl, argc) : nullptr;
          add_relation(sc.source, RelationKind::Calls, ctor ? ctor->id : kNoEntity,
                       st.fqn + ".<init>", st.fqn);
        }
        return next;
      }
      if (name == "this") {
        cur = ExprType{self->fqn, self, 0, false};
      } else {
        ensure_supers(*self);
        cur = self->super_type;
      }
      text = cur.fqn;
      return continue_chain(j, end, sc, cur, text, false, prefix_update);
    }

    if (f.is(j, "(")) {
      std::size_t next = j;
      cur = emit_call(nullptr, {}, name, j, sc, next);
      return continue_chain(next, end, sc, cur, name, false);
    }
    if (const ExprType* local = sc.find_local(name)) {
      cur = *local;
      text = name;
    } else if (auto [fd, owner] = lookup_field(sc, name); fd != nullptr) {
      field = PendingField{fd->id, owner->fqn + "." + fd->name};
      cur = field_type(*fd, owner);
      text = field.fqn;
    } else {
      Resolved r = resolve_simple(name, sc);
      if ((r.found && !r.type_var) || looks_like_type(name)) {
        cur = ExprType{r.fqn, r.decl, 0, true};
        text = r.fqn;
        type_qualifier = true;
      } else if (f.is(j, ".") && f.ident(j + 1)) {
        // Possibly a package-qualified type name.
        std::vector<std::string> parts{name};
        std::size_t k = j;
        while (f.is(k, ".") && f.ident(k + 1) && !looks_like_type(parts.back())) {
          parts.push_back(f.tok(k + 1).text);
          k += 2;
        }
        if (looks_like_type(parts.back()) && parts.size() > 1) {
          const std::string fqn = join(parts, parts.size());
          cur = ExprType{fqn, internal(fqn), 0, true};
          text = fqn;
          type_qualifier = true;
          j = k;
        } else {
          text = name;
        }
      } else {
        text = name;
      }
    }
    return continue_chain(j, end, sc, cur, text, type_qualifier, prefix_update, field);
  }

  std::pair<FieldDecl*, TypeDecl*> lookup_field(const Scope& sc, const std::string& name) {
    for (const Scope* s = &sc; s != nullptr; s = s->enclosing)
      for (TypeDecl* t = s->type; t != nullptr; t = t->outer) {
        auto hit = find_field(t, name);
        if (hit.first != nullptr) return hit;
      }
    return {nullptr, nullptr};
  }

  std::size_t continue_chain(std::size_t j, std::size_t end, Scope& sc, ExprType cur,
                             std::string text, bool type_qualifier, bool prefix_update = false,
                             PendingField field = {}) {
    FileUnit& f = *sc.file;
    auto use_qualifier = [&] {
      if (type_qualifier && cur.known())
        add_relation(sc.source, RelationKind::Uses, cur.decl ? cur.decl->id : kNoEntity, cur.fqn);
      type_qualifier = false;
    };
    while (j < end) {
      if (f.is(j, ".")) {
        std::size_t k = j + 1;
        if (f.is(k, "<")) {
          std::vector<TypeRef> ignored;
          parse_type_args(f, k, ignored);
        }
        if (f.tok(k).kind != TokenKind::Identifier) break;
        const std::string member = f.tok(k).text;
        if (member == "new") break;  // qualified inner creation: let scan() handle it
        if (member == "class") {
          use_qualifier();
          flush_read(sc.source, field);
          cur = ExprType{"java.lang.Class", nullptr, 0, false};
          text = cur.fqn;
          j = k + 1;
          continue;
        }
        if (member == "this") {
          cur.is_static = false;
          type_qualifier = false;
          j = k + 1;
          continue;
        }
        if (f.is(k + 1, "(")) {
          flush_read(sc.source, field);
          std::size_t next = k + 1;
          const ExprType* receiver = cur.known() ? &cur : nullptr;
          ExprType unknown;
          if (receiver == nullptr) receiver = &unknown;
          type_qualifier = false;  // owner of the call covers the type use
          ExprType result = emit_call(receiver, text, member, k + 1, sc, next);
          text = result.known() ? result.fqn : text + "." + member;
          cur = result;
          j = next;
          continue;
        }
        flush_read(sc.source, field);
        if (cur.is_static && cur.decl != nullptr) {
          if (TypeDecl* nested = member_type(cur.decl, member)) {
            cur = ExprType{nested->fqn, nested, 0, true};
            text = cur.fqn;
            j = k + 1;
            continue;
          }
        }
        if (cur.is_static && cur.decl == nullptr && cur.known() && looks_like_type(member)) {
          cur = ExprType{cur.fqn + "." + member, nullptr, 0, true};
          text = cur.fqn;
          j = k + 1;
          continue;
        }
        use_qualifier();
        if (cur.decl != nullptr && cur.dims == 0) {
          auto [fd, owner] = find_field(cur.decl, member);
          if (fd != nullptr) {
            field = PendingField{fd->id, owner->fqn + "." + fd->name};
            cur = field_type(*fd, owner);
            text = field.fqn;
            j = k + 1;
            continue;
          }
        }
        if (cur.dims > 0 && member == "length") {
          cur = ExprType{};
        } else {
          cur = ExprType{};
        }
        text += "." + member;
        j = k + 1;
        continue;
      }
      if (f.is(j, "[")) {
        use_qualifier();
        flush_read(sc.source, field);
        const std::size_t close = f.partner(j);
        scan(j + 1, close, sc);
        if (cur.dims > 0) --cur.dims;
        else cur = {};
        j = close + 1;
        continue;
      }
      if (f.is(j, "::")) {
        use_qualifier();
        flush_read(sc.source, field);
        j += 2;
        return j;
      }
      break;
    }
    use_qualifier();
    if (field.id != kNoEntity) {
      const bool write = prefix_update || (j < f.end() && f.tok(j).kind == TokenKind::Punct &&
                                           is_assignment(f.tok(j).text));
      add_relation(sc.source, write ? RelationKind::Writes : RelationKind::Reads, field.id,
                   field.fqn);
    }
    return j;
  }

  std::string project_id_;
  EntityId next_id_;
  ProjectFacts facts_;
  std::deque<FileUnit> files_;
  std::deque<TypeDecl> types_;
  std::unordered_map<std::string, TypeDecl*> by_fqn_;
  std::map<std::string, EntityId> packages_;
};

}  // namespace

ProjectFacts extract_sources(std::vector<SourceFile> files, std::string project_id,
                             EntityId first_id) {
  return Extractor(std::move(project_id), first_id).run(std::move(files), {});
}

ProjectFacts extract_project(const std::filesystem::path& project_root, std::string project_id,
                             EntityId first_id) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(project_root, ec))
    throw IoError("project root is not a directory: " + project_root.string());
  std::vector<ExtractWarning> warnings;
  std::vector<fs::path> paths;
  fs::recursive_directory_iterator it(project_root,
                                      fs::directory_options::skip_permission_denied, ec);
  if (ec) throw IoError("cannot list " + project_root.string() + ": " + ec.message());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) {
      warnings.push_back({ExtractWarning::Kind::UnreadableFile, it->path().string(), 0,
                          ec.message()});
      ec.clear();
      continue;
    }
    if (it->path().extension() == ".java" && !it->is_directory(ec)) paths.push_back(it->path());
  }
  std::vector<SourceFile> sources;
  for (const auto& p : paths) {
    const std::string rel = p.lexically_relative(project_root).generic_string();
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    if (in) buf << in.rdbuf();
    if (!in || in.bad()) {
      warnings.push_back({ExtractWarning::Kind::UnreadableFile, rel, 0, "cannot read file"});
      continue;
    }
    sources.push_back(SourceFile{rel, buf.str()});
  }
  std::sort(warnings.begin(), warnings.end(),
            [](const auto& a, const auto& b) { return a.file < b.file; });
  return Extractor(std::move(project_id), first_id).run(std::move(sources), std::move(warnings));
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IoError("cannot read manifest " + manifest.string());
  const std::filesystem::path base = manifest.parent_path();
  std::vector<ManifestEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string body = line.substr(first, last - first + 1);
    const auto gap = body.find_first_of(" \t");
    ManifestEntry e;
    std::filesystem::path p;
    if (gap == std::string::npos) {
      p = body;
    } else {
      e.project_id = body.substr(0, gap);
      p = body.substr(body.find_first_not_of(" \t", gap));
    }
    e.root = p.is_absolute() ? p : base / p;
    if (e.project_id.empty()) e.project_id = e.root.lexically_normal().filename().string();
    if (e.project_id.empty()) e.project_id = e.root.lexically_normal().parent_path().filename().string();
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ProjectFacts> extract_corpus(const std::vector<ManifestEntry>& projects,
                                         unsigned jobs) {
  std::vector<ManifestEntry> order = projects;
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.project_id < b.project_id; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (order[i].project_id == order[i - 1].project_id)
      throw DuplicateProjectError("duplicate project id in manifest: " + order[i].project_id);

  std::vector<ProjectFacts> out(order.size());
  std::vector<std::exception_ptr> errors(order.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(order.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < order.size(); k = next++) {
      try {
        out[k] = extract_project(order[k].root, order[k].project_id, 1);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Re-base ids so they are unique across the corpus.
  EntityId offset = 0;
  for (auto& p : out) {
    for (auto& e : p.entities) e.id += offset;
    for (auto& r : p.relations) {
      r.source += offset;
      if (r.target_id != kNoEntity) r.target_id += offset;
    }
    offset += p.entities.size();
  }
  return out;
}

}  // namespace sizelaw
