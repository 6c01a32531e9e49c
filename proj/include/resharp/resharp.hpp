#pragma once

#include "resharp/ast.hpp"
#include "resharp/charpred.hpp"
#include "resharp/derive.hpp"
#include "resharp/errors.hpp"
#include "resharp/lnf.hpp"
#include "resharp/matcher.hpp"
#include "resharp/minterms.hpp"
#include "resharp/offsets.hpp"
#include "resharp/oracle.hpp"
#include "resharp/parser.hpp"
#include "resharp/print.hpp"
#include "resharp/util.hpp"
