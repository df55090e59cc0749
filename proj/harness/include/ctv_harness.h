/*
 * Runtime contract for generated cache-timing benchmark programs.
 *
 * Program command line (parsed by ctv_init):
 *   <program> --out PATH [--threads L0,L1,R0,R1] [--run-num N]
 * L0/L1 are two hardware threads of the local core (L1 = SMT sibling),
 * R0/R1 the same for the remote core. Omitted threads default to -1 and a
 * process that needs one exits with CTV_EXIT_SKIP_SCHEDULE.
 *
 * Sample output, one line per timed batch:
 *   case_id, candidate{A|ALIAS|NIB}, trial_index, block_index, t_first_cycles, t_second_cycles_or_-1
 */
#ifndef CTV_HARNESS_H
#define CTV_HARNESS_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define CTV_EXIT_OK 0
#define CTV_EXIT_USAGE 2
#define CTV_EXIT_SKIP_SCHEDULE 10
#define CTV_EXIT_SKIP_CAPABILITY 11
#define CTV_EXIT_SEQUENCE_TIMEOUT 12

/* Candidate branches; the dummy branch always runs last and is never sampled. */
#define CTV_CAND_A 0
#define CTV_CAND_ALIAS 1
#define CTV_CAND_NIB 2
#define CTV_CAND_DUMMY 3
#define CTV_CANDIDATES 4

/* Hardware-thread slots named on the command line. */
#define CTV_SLOT_LOCAL 0
#define CTV_SLOT_LOCAL_SIBLING 1
#define CTV_SLOT_REMOTE 2
#define CTV_SLOT_REMOTE_SIBLING 3

typedef enum { CTV_READ = 0, CTV_WRITE = 1, CTV_FLUSH = 2 } ctv_op_kind;

/* Tracked lines. A, ALIAS and D share the target cache sets; NIB and DUMMY
 * map elsewhere. Each name stands for `blocks` lines in distinct sets. */
typedef enum { CTV_ADDR_A, CTV_ADDR_ALIAS, CTV_ADDR_D, CTV_ADDR_NIB, CTV_ADDR_DUMMY } ctv_addr;

typedef struct ctv_ctx ctv_ctx;
typedef void (*ctv_proc)(ctv_ctx *ctx);

ctv_ctx *ctv_init(int argc, char **argv, const char *case_id, int blocks, int steps_per_round);
int ctv_run_num(const ctv_ctx *ctx);
ctv_addr ctv_u_target(int candidate);

/* Loads every tracked line once before the first trial. */
void ctv_prime(ctv_ctx *ctx);

/* Pins the calling process; exits with CTV_EXIT_SKIP_SCHEDULE on failure. */
void ctv_pin(ctv_ctx *ctx, int slot);

/* Total order of steps across processes; tokens are consumed in order. */
void ctv_step_wait(ctv_ctx *ctx, long token);
void ctv_step_signal(ctv_ctx *ctx, long token);

/* All operations touch `blocks` lines with a fence between instructions. */
void ctv_op(ctv_ctx *ctx, ctv_op_kind kind, ctv_addr addr);
void ctv_flush_all(ctv_ctx *ctx);
void ctv_write_all(ctv_ctx *ctx);
void ctv_scramble(ctv_ctx *ctx);

/* Serialized cycle-counter delta around the batched operation. */
uint64_t ctv_timed(ctv_ctx *ctx, ctv_op_kind kind, ctv_addr addr);
uint64_t ctv_timed_flush_all(ctv_ctx *ctx);
uint64_t ctv_timed_write_all(ctv_ctx *ctx);
uint64_t ctv_timed_scramble(ctv_ctx *ctx);

void ctv_write_sample(ctv_ctx *ctx, int candidate, int trial, int block, uint64_t t_first, int64_t t_second);

/* Forks a sub-process running proc; the parent keeps running. */
void ctv_spawn(ctv_ctx *ctx, ctv_proc proc);
/* Waits for all sub-processes; returns the first non-zero exit code. */
int ctv_finish(ctv_ctx *ctx);

#ifdef __cplusplus
}
#endif

#endif
