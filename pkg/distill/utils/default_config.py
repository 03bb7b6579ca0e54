# NOTE: Copy this file to the config directory (see `distill --config-path`)
# and edit the values you want to change

#################################
#           SPECTRA             #
#################################

# decay-certificate search stops at MCAP_FACTOR * k matrix powers
# (the DISTILL_MCAP environment variable sets an absolute cap instead)
MCAP_FACTOR = 64

#################################
#          SEMIALGEBRAIC        #
#################################
EMPTINESS_SAMPLES = 4096
DNF_LIMIT = 512

#################################
#           COMMANDS            #
#################################
DEFAULT_HORIZON = 128
DEFAULT_STEPS = 16
CROSS_VALIDATE_WINDOW = 64
EMBED_CHECK_STEPS = 50

#################################
#            LOGGING            #
#################################
LOG_LEVEL = "WARNING"
