# The interactive session state machine, as the HTTP service drives it.
#
# char events extend the current prefix, select events commit a word
# with an automatic trailing space, punctuation is its own token, and
# the live counters always satisfy ksr = (1 - kp/ka) * 100.

from wordpredict import CombinerConfig, PredictionPipeline
from wordpredict.session import PipelinePredictor, PredictionSession
from wordpredict.service import build_demo_models

model, space = build_demo_models()
pipe = PredictionPipeline(model, space, CombinerConfig(method="cwgi", order=model.order))
session = PredictionSession(PipelinePredictor(pipe))


def show(event):
    words = [w for w, _ in session.last_list]
    print(
        f"{event:14s} text={session.text!r:30s} kp={session.kp:2d} "
        f"ka={session.ka:2d} ksr={session.ksr:6.2f}%  list={words}"
    )


show("(start)")
session.key_char("t")
show("char 't'")
shown = [w for w, _ in session.last_list]
session.key_select(0)
show(f"select {shown[0]!r}")
session.key_char("s")
show("char 's'")
session.key_backspace()
show("backspace")
for c in "sail":
    session.key_char(c)
show("typed 'sail'")
session.key_char(" ")
show("space commits")
session.key_char(".")
show("punctuation")

# to run the same loop over HTTP:  predictd serve --demo  and POST the
# events to /sessions/{id}/events (see the frontend/ keyboard client)
