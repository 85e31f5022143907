#!/usr/bin/env python3
"""Print gate scores for every bundled fixture answer.

Run after editing the fixture texts or the word lists to confirm the
golden answers clear the default threshold with margin and the
off-topic / topic-swapped answers stay clearly below it.
"""

from codeagent import fixtures
from codeagent.agents.prompts import pattern_for_goal, render_prompt
from codeagent.agents.roles import default_role_cards
from codeagent.core import TaskKind
from codeagent.pipeline.conversation import combine_question
from codeagent.qachecker import default_config, refine, score


def main() -> None:
    req = fixtures.tiny_request()
    cards = default_role_cards()
    cfg = default_config()

    def show(goal, phase, instructor, answer, label):
        q = render_prompt(cards[instructor], goal, req, phase=phase)
        s = score(q, answer, cfg, pattern_for_goal(goal))
        flag = "PASS" if s.combined >= cfg.tau else "fail"
        print(
            f"{label:22s} rel={s.relevance:.3f} spec={s.specificity:.3f} "
            f"coh={s.coherence:.3f} comb={s.combined:.3f}  {flag}"
        )
        return q, s

    q_ca, _ = show(TaskKind.CA, 2, "Reviewer", fixtures.GOLDEN_CA_ANSWER, "CA golden")
    show(TaskKind.VA, 2, "Reviewer", fixtures.GOLDEN_VA_ANSWER, "VA golden")
    show(TaskKind.FA, 2, "Reviewer", fixtures.GOLDEN_FA_ANSWER, "FA golden")
    show(TaskKind.CR, 2, "Reviewer", fixtures.GOLDEN_CR_ANSWER, "CR golden")
    show("code_alignment", 3, "Coder", fixtures.GOLDEN_ALIGNMENT_ANSWER, "alignment golden")
    _, swapped = show(
        TaskKind.CA, 2, "Reviewer", fixtures.TOPIC_SWAPPED_CA_ANSWER, "CA topic-swapped"
    )
    show(TaskKind.CA, 2, "Reviewer", fixtures.OFF_TOPIC_ANSWER, "CA off-topic")

    aai = refine(q_ca, fixtures.TOPIC_SWAPPED_CA_ANSWER, swapped, cfg,
                 pattern_for_goal(TaskKind.CA))
    refined = combine_question(q_ca, [aai])
    second = score(refined, fixtures.GOLDEN_CA_ANSWER, cfg, pattern_for_goal(TaskKind.CA))
    print(f"{'CA golden vs refined':22s} comb={second.combined:.3f}  "
          f"{'PASS' if second.combined >= cfg.tau else 'fail'}")
    print("aai embeds original question:", q_ca in aai)


if __name__ == "__main__":
    main()
