class ModuleDocFragment(object):
    # Standard documentation
    DOCUMENTATION = r'''
    requirements:
        - numpy>=1.17
        - scipy>=1.3
    options:
        tol:
            description:
                - tolerance for geometric residuals
            default: to environment variable `CKNET_TOL` or 1e-8
        config:
            description:
                - JSON file whose keys mirror the option names. Command line flags take precedence over it; unknown
                  keys are rejected
            default: to environment variable `CKNET_CONFIG`
        log_level:
            description:
                - logging threshold for messages written to stderr
            default: to environment variable `CKNET_LOG_LEVEL` or WARNING
            choices: ["DEBUG", "INFO", "WARNING", "ERROR"]
        output:
            description:
                - file written by the command. `-` writes nothing besides the JSON result on stdout
            default: "-"
'''
