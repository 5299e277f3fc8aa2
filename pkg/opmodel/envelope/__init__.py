# Evaluations of the enveloping cooperad
