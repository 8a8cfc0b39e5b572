#pragma once

#include "clonebench/canonical.hpp"
#include "clonebench/clones.hpp"
#include "clonebench/equations.hpp"
#include "clonebench/error.hpp"
#include "clonebench/finite_structure.hpp"
#include "clonebench/lifting.hpp"
#include "clonebench/operation.hpp"
#include "clonebench/order_term.hpp"
#include "clonebench/plmap.hpp"
#include "clonebench/qclone.hpp"
#include "clonebench/rational.hpp"
#include "clonebench/symbolic_structure.hpp"
#include "clonebench/table_op.hpp"
#include "clonebench/term.hpp"
