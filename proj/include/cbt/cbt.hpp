#pragma once

#include <cbt/access_sim.hpp>
#include <cbt/analytic.hpp>
#include <cbt/consensus.hpp>
#include <cbt/csv.hpp>
#include <cbt/errors.hpp>
#include <cbt/gossip.hpp>
#include <cbt/ledger.hpp>
#include <cbt/runner.hpp>
#include <cbt/signature.hpp>
#include <cbt/transaction.hpp>
#include <cbt/types.hpp>
