from hypothesis import settings

# property tests here do real numpy work per example; wall-clock deadlines
# only add flakiness on loaded machines
settings.register_profile("xorshard", deadline=None)
settings.load_profile("xorshard")
