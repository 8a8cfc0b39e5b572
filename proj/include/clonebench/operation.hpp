#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "clonebench/error.hpp"
#include "clonebench/order_term.hpp"
#include "clonebench/table_op.hpp"

namespace clonebench {

/// A named finitary operation: a full table on a finite set, or an order term over Q.
struct Operation {
  std::string name;
  int arity = 1;
  std::variant<TableOp, OrderTerm> body;

  static Operation table(std::string name, TableOp t) {
    if (!t.is_valid()) throw InputError("operation " + name + " has an invalid table");
    int n = t.arity;
    return Operation{std::move(name), n, std::move(t)};
  }

  static Operation term(std::string name, int arity, OrderTerm t) {
    if (arity < 1) throw InputError("operation " + name + " needs positive arity");
    if (t.max_variable() >= arity) throw InputError("operation " + name + " uses a variable beyond its arity");
    return Operation{std::move(name), arity, std::move(t)};
  }

  bool is_table() const { return std::holds_alternative<TableOp>(body); }
  const TableOp& as_table() const { return std::get<TableOp>(body); }
  const OrderTerm& as_term() const { return std::get<OrderTerm>(body); }

  std::string describe() const {
    if (is_table()) return name + "/" + std::to_string(arity) + " table [" + as_table().to_string() + "]";
    return name + "/" + std::to_string(arity) + " = " + as_term().to_string();
  }
};

struct OpsFile {
  std::optional<int> base;
  PLMapTable maps;
  std::vector<Operation> ops;

  const Operation& find(const std::string& name) const {
    for (const Operation& op : ops)
      if (op.name == name) return op;
    throw InputError("no operation named " + name);
  }
};

/// Operation file:
///   base <d>                               (optional; else inferred from the rows)
///   plmap <name>  followed by `piece ...` lines
///   op <name> <arity> concrete             followed by rows `<in_1> ... <in_n> -> <out>`
///   op <name> <arity> term <expression>
inline OpsFile parse_ops(std::string_view text) {
  struct PendingTable {
    std::string name;
    int arity;
    int line;
    std::vector<std::pair<Tuple, int>> rows;
  };
  struct Pending {
    bool is_table;
    std::size_t index;  // into tables or terms
  };

  OpsFile file;
  std::vector<PendingTable> tables;
  std::vector<Operation> terms;
  std::vector<Pending> order;
  std::string current_map;
  std::vector<Piece> current_pieces;
  int current_map_line = 0;
  enum class Block { None, Table, Map } block = Block::None;

  auto close_map = [&] {
    if (block != Block::Map) return;
    try {
      file.maps.insert_or_assign(current_map, PLMap::from_pieces(std::move(current_pieces)));
    } catch (const InputError& e) {
      throw ParseError(current_map_line, "plmap " + current_map + ": " + e.what());
    }
    current_pieces.clear();
  };

  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    try {
      if (head == "base") {
        close_map();
        block = Block::None;
        int d;
        if (!(ls >> d) || d < 1) throw ParseError(line_no, "expected 'base <positive integer>'");
        file.base = d;
      } else if (head == "plmap") {
        close_map();
        if (!(ls >> current_map)) throw ParseError(line_no, "expected 'plmap <name>'");
        current_map_line = line_no;
        block = Block::Map;
      } else if (head == "piece") {
        if (block != Block::Map) throw ParseError(line_no, "piece outside a plmap block");
        current_pieces.push_back(PLMap::parse_piece(line));
      } else if (head == "op") {
        close_map();
        std::string name, kind;
        int arity = 0;
        if (!(ls >> name >> arity >> kind) || arity < 1)
          throw ParseError(line_no, "expected 'op <name> <arity> concrete|term ...'");
        for (const Pending& p : order) {
          const std::string& other = p.is_table ? tables[p.index].name : terms[p.index].name;
          if (other == name) throw ParseError(line_no, "duplicate operation " + name);
        }
        if (kind == "concrete") {
          order.push_back({true, tables.size()});
          tables.push_back({name, arity, line_no, {}});
          block = Block::Table;
        } else if (kind == "term") {
          std::string expr;
          std::getline(ls, expr);
          order.push_back({false, terms.size()});
          terms.push_back(Operation::term(name, arity, parse_order_term(expr, file.maps)));
          block = Block::None;
        } else {
          throw ParseError(line_no, "unknown operation kind '" + kind + "'");
        }
      } else {
        if (block != Block::Table) throw ParseError(line_no, "syntax error: unexpected '" + head + "'");
        auto arrow = line.find("->");
        if (arrow == std::string::npos) throw ParseError(line_no, "table row needs '->'");
        std::istringstream lhs(line.substr(0, arrow)), rhs(line.substr(arrow + 2));
        Tuple args;
        for (int v; lhs >> v;) args.push_back(v);
        if (!lhs.eof()) throw ParseError(line_no, "non-integer table entry");
        int out;
        std::string extra;
        if (!(rhs >> out) || (rhs >> extra)) throw ParseError(line_no, "table row needs one output");
        PendingTable& t = tables.back();
        if (static_cast<int>(args.size()) != t.arity) throw ParseError(line_no, "arity mismatch in table row");
        t.rows.emplace_back(std::move(args), out);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  close_map();

  int base = 0;
  if (file.base) {
    base = *file.base;
  } else {
    for (const PendingTable& t : tables)
      for (const auto& [args, out] : t.rows) {
        for (int v : args) base = std::max(base, v + 1);
        base = std::max(base, out + 1);
      }
    if (!tables.empty()) file.base = base;
  }

  for (const Pending& p : order) {
    if (!p.is_table) {
      file.ops.push_back(terms[p.index]);
      continue;
    }
    const PendingTable& t = tables[p.index];
    TableOp op{t.arity, base, std::vector<int>(TableOp::table_size(t.arity, base), -1)};
    for (const auto& [args, out] : t.rows) {
      for (int v : args)
        if (v < 0 || v >= base) throw ParseError(t.line, "operation " + t.name + ": element out of range");
      if (out < 0 || out >= base) throw ParseError(t.line, "operation " + t.name + ": element out of range");
      int& slot = op.values[op.index(args)];
      if (slot != -1) throw ParseError(t.line, "operation " + t.name + ": duplicate row");
      slot = out;
    }
    for (int v : op.values)
      if (v == -1) throw ParseError(t.line, "operation " + t.name + ": table is not total");
    file.ops.push_back(Operation::table(t.name, std::move(op)));
  }
  return file;
}

}  // namespace clonebench
